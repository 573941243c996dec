use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

macro_rules! feature_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!("invalid {} value `{s}`", stringify!($name).to_lowercase())),
                }
            }
        }

        impl Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

feature_enum!(Person { First => "1", Second => "2", Third => "3" });
feature_enum!(Number { Singular => "sg", Plural => "pl" });
feature_enum!(Tense { Present => "present", Past => "past" });
feature_enum!(Case { Nominative => "nominative", Genitive => "genitive", Dative => "dative", Accusative => "accusative" });
feature_enum!(Gender { Masculine => "m", Feminine => "f", Neuter => "n" });
feature_enum!(Degree { Positive => "positive", Comparative => "comparative", Superlative => "superlative" });
feature_enum!(Definiteness { Definite => "definite", Indefinite => "indefinite" });
feature_enum!(
    /// A grammatical feature dimension.
    Dimension {
        Person => "person",
        Number => "number",
        Tense => "tense",
        Case => "case",
        Gender => "gender",
        Degree => "degree",
        Definiteness => "definiteness",
    }
);

/// A set of grammatical features with at most one value per dimension.
///
/// The text form lists `dimension=value` pairs in a fixed dimension order,
/// e.g. `person=3,number=sg,tense=present`; it is used as the key of
/// inflected forms in lexeme documents.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureBundle {
    pub person: Option<Person>,
    pub number: Option<Number>,
    pub tense: Option<Tense>,
    pub case: Option<Case>,
    pub gender: Option<Gender>,
    pub degree: Option<Degree>,
    pub definiteness: Option<Definiteness>,
}

impl FeatureBundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn person(mut self, p: Person) -> Self {
        self.person = Some(p);
        self
    }
    pub fn number(mut self, n: Number) -> Self {
        self.number = Some(n);
        self
    }
    pub fn tense(mut self, t: Tense) -> Self {
        self.tense = Some(t);
        self
    }
    pub fn case(mut self, c: Case) -> Self {
        self.case = Some(c);
        self
    }
    pub fn gender(mut self, g: Gender) -> Self {
        self.gender = Some(g);
        self
    }
    pub fn degree(mut self, d: Degree) -> Self {
        self.degree = Some(d);
        self
    }
    pub fn definiteness(mut self, d: Definiteness) -> Self {
        self.definiteness = Some(d);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.dimensions().is_empty()
    }

    /// Dimensions that carry a value, in canonical order.
    pub fn dimensions(&self) -> Vec<Dimension> {
        let mut dims = Vec::new();
        if self.person.is_some() {
            dims.push(Dimension::Person);
        }
        if self.number.is_some() {
            dims.push(Dimension::Number);
        }
        if self.tense.is_some() {
            dims.push(Dimension::Tense);
        }
        if self.case.is_some() {
            dims.push(Dimension::Case);
        }
        if self.gender.is_some() {
            dims.push(Dimension::Gender);
        }
        if self.degree.is_some() {
            dims.push(Dimension::Degree);
        }
        if self.definiteness.is_some() {
            dims.push(Dimension::Definiteness);
        }
        dims
    }

    /// Keeps only the given dimensions.
    pub fn project(&self, dims: &[Dimension]) -> FeatureBundle {
        let keep = |d| dims.contains(&d);
        FeatureBundle {
            person: self.person.filter(|_| keep(Dimension::Person)),
            number: self.number.filter(|_| keep(Dimension::Number)),
            tense: self.tense.filter(|_| keep(Dimension::Tense)),
            case: self.case.filter(|_| keep(Dimension::Case)),
            gender: self.gender.filter(|_| keep(Dimension::Gender)),
            degree: self.degree.filter(|_| keep(Dimension::Degree)),
            definiteness: self.definiteness.filter(|_| keep(Dimension::Definiteness)),
        }
    }

    /// Values from `other` win where both are set.
    pub fn merge(&self, other: &FeatureBundle) -> FeatureBundle {
        FeatureBundle {
            person: other.person.or(self.person),
            number: other.number.or(self.number),
            tense: other.tense.or(self.tense),
            case: other.case.or(self.case),
            gender: other.gender.or(self.gender),
            degree: other.degree.or(self.degree),
            definiteness: other.definiteness.or(self.definiteness),
        }
    }

    fn set(&mut self, dim: Dimension, value: &str) -> Result<bool, String> {
        macro_rules! put {
            ($field:ident) => {{
                let fresh = self.$field.is_none();
                self.$field = Some(value.parse()?);
                Ok(fresh)
            }};
        }
        match dim {
            Dimension::Person => put!(person),
            Dimension::Number => put!(number),
            Dimension::Tense => put!(tense),
            Dimension::Case => put!(case),
            Dimension::Gender => put!(gender),
            Dimension::Degree => put!(degree),
            Dimension::Definiteness => put!(definiteness),
        }
    }

    fn value_of(&self, dim: Dimension) -> Option<&'static str> {
        match dim {
            Dimension::Person => self.person.map(Person::as_str),
            Dimension::Number => self.number.map(Number::as_str),
            Dimension::Tense => self.tense.map(Tense::as_str),
            Dimension::Case => self.case.map(Case::as_str),
            Dimension::Gender => self.gender.map(Gender::as_str),
            Dimension::Degree => self.degree.map(Degree::as_str),
            Dimension::Definiteness => self.definiteness.map(Definiteness::as_str),
        }
    }
}

impl fmt::Display for FeatureBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, dim) in self.dimensions().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{dim}={}", self.value_of(dim).expect("listed dimension is set"))?;
        }
        Ok(())
    }
}

impl FromStr for FeatureBundle {
    type Err = String;

    /// Parses `dim=value,...`; repeating a dimension is an error.
    fn from_str(s: &str) -> Result<Self, String> {
        let mut bundle = FeatureBundle::default();
        let s = s.trim();
        if s.is_empty() {
            return Ok(bundle);
        }
        for pair in s.split(',') {
            let (dim, value) = pair
                .split_once('=')
                .ok_or_else(|| format!("feature `{pair}` is not of the form dimension=value"))?;
            let dim: Dimension = dim.trim().parse()?;
            if !bundle.set(dim, value.trim())? {
                return Err(format!("dimension `{dim}` given twice"));
            }
        }
        Ok(bundle)
    }
}

impl Serialize for FeatureBundle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FeatureBundle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form() {
        let b: FeatureBundle = "tense=present, person=3,number=sg".parse().unwrap();
        assert_eq!(b, FeatureBundle::new().person(Person::Third).number(Number::Singular).tense(Tense::Present));
        assert_eq!(b.to_string(), "person=3,number=sg,tense=present");
        assert!("person=3,person=1".parse::<FeatureBundle>().is_err());
        assert!("mood=subjunctive".parse::<FeatureBundle>().is_err());
        assert!("case=ablative".parse::<FeatureBundle>().is_err());
        assert_eq!("".parse::<FeatureBundle>().unwrap(), FeatureBundle::new());
    }

    #[test]
    fn project_and_merge() {
        let b = FeatureBundle::new().case(Case::Dative).gender(Gender::Neuter).person(Person::Third);
        assert_eq!(b.project(&[Dimension::Case]), FeatureBundle::new().case(Case::Dative));
        let m = b.merge(&FeatureBundle::new().case(Case::Genitive));
        assert_eq!(m.case, Some(Case::Genitive));
        assert_eq!(m.gender, Some(Gender::Neuter));
    }
}
