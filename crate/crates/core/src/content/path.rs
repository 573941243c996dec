use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Segment {
    Key(String),
    Index(usize),
}

/// Location of a value inside a content tree, written `content[1].after[2]`.
/// The empty path denotes the root instantiation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ContentPath(pub Vec<Segment>);

impl ContentPath {
    pub fn root() -> Self {
        ContentPath(Vec::new())
    }

    pub fn key(&self, key: &str) -> Self {
        let mut p = self.clone();
        p.0.push(Segment::Key(key.to_string()));
        p
    }

    pub fn index(&self, i: usize) -> Self {
        let mut p = self.clone();
        p.0.push(Segment::Index(i));
        p
    }

    /// Appends a relative path.
    pub fn join(&self, other: &ContentPath) -> Self {
        let mut p = self.clone();
        p.0.extend(other.0.iter().cloned());
        p
    }

    pub fn segments(&self) -> &[Segment] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ContentPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.0.iter().enumerate() {
            match seg {
                Segment::Key(k) if i == 0 => f.write_str(k)?,
                Segment::Key(k) => write!(f, ".{k}")?,
                Segment::Index(n) => write!(f, "[{n}]")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed path `{0}`")]
pub struct PathSyntaxError(pub String);

impl FromStr for ContentPath {
    type Err = PathSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PathSyntaxError(s.to_string());
        let mut segments = Vec::new();
        let mut rest = s.trim();
        let mut first = true;
        while !rest.is_empty() {
            if let Some(after) = rest.strip_prefix('[') {
                let close = after.find(']').ok_or_else(bad)?;
                let n = after[..close].trim().parse().map_err(|_| bad())?;
                segments.push(Segment::Index(n));
                rest = &after[close + 1..];
            } else {
                let body = if first { rest } else { rest.strip_prefix('.').ok_or_else(bad)? };
                let end = body.find(['.', '[']).unwrap_or(body.len());
                let key = &body[..end];
                if !super::value::is_identifier(key) {
                    return Err(bad());
                }
                segments.push(Segment::Key(key.to_string()));
                rest = &body[end..];
            }
            first = false;
        }
        Ok(ContentPath(segments))
    }
}

impl Serialize for ContentPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ContentPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        let p = ContentPath::root().key("content").index(1).key("after").index(2);
        assert_eq!(p.to_string(), "content[1].after[2]");
        assert_eq!("content[1].after[2]".parse::<ContentPath>().unwrap(), p);
        assert_eq!("".parse::<ContentPath>().unwrap(), ContentPath::root());
        assert!("content[x]".parse::<ContentPath>().is_err());
        assert!("content..a".parse::<ContentPath>().is_err());
    }
}
