//! Non-destructive edits: every operation returns a new document and leaves
//! its input untouched, so callers can keep the old version for undo.

use super::path::{ContentPath, Segment};
use super::value::{Content, ConstructorInstantiation, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EditError {
    #[error("PATH_NOT_FOUND: `{0}` does not resolve in this content")]
    PathNotFound(ContentPath),
}

/// Sets the value at `path`. The final key may be new, which adds it to
/// its instantiation; every other segment must already resolve. An empty
/// path replaces the root and requires a constructor value.
pub fn edit_value(content: &Content, path: &ContentPath, new: Value) -> Result<Content, EditError> {
    let not_found = || EditError::PathNotFound(path.clone());
    let mut out = content.clone();
    let Some((last, parents)) = path.segments().split_last() else {
        let inst = new.as_instantiation().ok_or_else(not_found)?.into_owned();
        out.root = inst;
        return Ok(out);
    };
    let parent = resolve_parent(&mut out.root, parents).ok_or_else(not_found)?;
    match (parent, last) {
        (Parent::Inst(inst), Segment::Key(k)) => {
            inst.arguments.insert(k.clone(), new);
        }
        (Parent::Value(v), Segment::Key(k)) => match v {
            Value::Enum(id) => {
                *v = Value::Constructor(ConstructorInstantiation::new(id.clone()).with(k.clone(), new));
            }
            Value::Constructor(inst) => {
                inst.arguments.insert(k.clone(), new);
            }
            _ => return Err(not_found()),
        },
        (Parent::Value(Value::List(items)), Segment::Index(i)) if *i < items.len() => items[*i] = new,
        _ => return Err(not_found()),
    }
    Ok(out)
}

/// Removes a key from its instantiation or an element from its list.
pub fn remove_value(content: &Content, path: &ContentPath) -> Result<Content, EditError> {
    let not_found = || EditError::PathNotFound(path.clone());
    let mut out = content.clone();
    let (last, parents) = path.segments().split_last().ok_or_else(not_found)?;
    let parent = resolve_parent(&mut out.root, parents).ok_or_else(not_found)?;
    match (parent, last) {
        (Parent::Inst(inst), Segment::Key(k)) => {
            inst.arguments.shift_remove(k).ok_or_else(not_found)?;
        }
        (Parent::Value(v), Segment::Key(k)) => {
            let Value::Constructor(inst) = v else { return Err(not_found()) };
            inst.arguments.shift_remove(k).ok_or_else(not_found)?;
            if inst.arguments.is_empty() {
                *v = Value::Enum(inst.constructor_id.clone());
            }
        }
        (Parent::Value(Value::List(items)), Segment::Index(i)) if *i < items.len() => {
            items.remove(*i);
        }
        _ => return Err(not_found()),
    }
    Ok(out)
}

/// Reads the value at a non-empty path.
pub fn get_value<'a>(content: &'a Content, path: &ContentPath) -> Option<&'a Value> {
    let (first, rest) = path.segments().split_first()?;
    let Segment::Key(k) = first else { return None };
    let mut cur = content.root.get(k)?;
    for seg in rest {
        cur = match (cur, seg) {
            (Value::Constructor(inst), Segment::Key(k)) => inst.get(k)?,
            (Value::List(items), Segment::Index(i)) => items.get(*i)?,
            _ => return None,
        };
    }
    Some(cur)
}

enum Parent<'a> {
    Inst(&'a mut ConstructorInstantiation),
    Value(&'a mut Value),
}

fn resolve_parent<'a>(root: &'a mut ConstructorInstantiation, segments: &[Segment]) -> Option<Parent<'a>> {
    let Some((first, rest)) = segments.split_first() else {
        return Some(Parent::Inst(root));
    };
    let Segment::Key(k) = first else { return None };
    let mut cur = root.arguments.get_mut(k)?;
    for seg in rest {
        cur = match (cur, seg) {
            (Value::Constructor(inst), Segment::Key(k)) => inst.arguments.get_mut(k)?,
            (Value::List(items), Segment::Index(i)) => items.get_mut(*i)?,
            _ => return None,
        };
    }
    Some(Parent::Value(cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::syntax::parse_content;

    fn doc() -> Content {
        parse_content("A(x: 1, l: [Q1, Q2, Q3], n: B(y: \"s\"))").unwrap()
    }

    #[test]
    fn set_and_remove() {
        let c = doc();
        let p: ContentPath = "n.y".parse().unwrap();
        let c2 = edit_value(&c, &p, Value::text("t")).unwrap();
        assert_eq!(get_value(&c2, &p), Some(&Value::text("t")));
        assert_eq!(get_value(&c, &p), Some(&Value::text("s")));

        let c3 = remove_value(&c, &"l[1]".parse().unwrap()).unwrap();
        assert_eq!(get_value(&c3, &"l".parse().unwrap()).map(|v| match v {
            Value::List(xs) => xs.len(),
            _ => 0,
        }), Some(2));

        let c4 = remove_value(&c, &"n.y".parse().unwrap()).unwrap();
        assert_eq!(get_value(&c4, &"n".parse().unwrap()), Some(&Value::Enum("B".into())));
    }

    #[test]
    fn identity_edit_is_structurally_equal() {
        let c = doc();
        let p: ContentPath = "l[0]".parse().unwrap();
        let same = edit_value(&c, &p, get_value(&c, &p).unwrap().clone()).unwrap();
        assert_eq!(same, c);
    }

    #[test]
    fn scalar_child_is_not_found() {
        let c = doc();
        for p in ["x.y", "l[7]", "x[0]", "missing.y", "n.y.z"] {
            let p: ContentPath = p.parse().unwrap();
            assert_eq!(edit_value(&c, &p, Value::int(0)), Err(EditError::PathNotFound(p.clone())));
        }
        assert!(remove_value(&c, &"n.zz".parse().unwrap()).is_err());
    }
}
