//! Arithmetic, comparison and list builtins every registry starts with.

use super::datum::Datum;
use super::eval::{EvalError, Evaluator, Registry, RegistryError};
use super::function::{FunctionDef, Implementation};
use super::types::TypeDef;

/// The recursive multiplication, written in the composition notation.
pub const MULTIPLY_COMPOSITION: &str = "if(condition: is_zero(x),
   then: 0,
   else: add(y, multiply(subtract(x, 1), y)))";

fn int(args: &[Datum], i: usize) -> Result<i64, EvalError> {
    args[i]
        .as_int()
        .ok_or_else(|| EvalError::TypeError(format!("expected an integer, got {}", args[i])))
}

fn list(d: Datum) -> Result<Vec<Datum>, EvalError> {
    match d {
        Datum::List(xs) => Ok(xs),
        other => Err(EvalError::TypeError(format!("expected a list, got {other}"))),
    }
}

fn overflow(op: &str) -> EvalError {
    EvalError::domain("OVERFLOW", format!("{op} overflows a 64-bit integer"))
}

pub fn install<E>(reg: &mut Registry<E>) -> Result<(), RegistryError> {
    reg.register_builtin(
        FunctionDef::new("is_natural", "boolean")
            .param("x", "integer")
            .test(&["0"], "true")
            .test(&["-1"], "false"),
        |_, a| Ok(Datum::Bool(int(&a, 0)? >= 0)),
    )?;
    reg.register_type(TypeDef {
        id: "positive_integer".to_string(),
        base: "integer".parse().expect("primitive"),
        predicate: "is_natural".to_string(),
    })?;
    reg.register_builtin(
        FunctionDef::new("is_zero", "boolean")
            .param("x", "integer")
            .test(&["0"], "true")
            .test(&["3"], "false"),
        |_, a| Ok(Datum::Bool(int(&a, 0)? == 0)),
    )?;
    reg.register_builtin(
        FunctionDef::new("add", "positive_integer")
            .param("x", "positive_integer")
            .param("y", "positive_integer")
            .test(&["2", "3"], "5"),
        |_, a| int(&a, 0)?.checked_add(int(&a, 1)?).map(Datum::Int).ok_or_else(|| overflow("add")),
    )?;
    // Subtraction on naturals: clamps at zero instead of going negative.
    reg.register_builtin(
        FunctionDef::new("subtract", "positive_integer")
            .param("x", "positive_integer")
            .param("y", "positive_integer")
            .test(&["5", "3"], "2")
            .test(&["1", "2"], "0")
            .postcondition("is_natural(result)"),
        |_, a| Ok(Datum::Int((int(&a, 0)? - int(&a, 1)?).max(0))),
    )?;
    reg.register_builtin(
        FunctionDef::new("multiply", "positive_integer")
            .label("en", "multiply")
            .param("x", "positive_integer")
            .param("y", "positive_integer")
            .test(&["2", "3"], "6")
            .test(&["0", "9"], "0")
            .test(&["12", "12"], "144"),
        |_, a| int(&a, 0)?.checked_mul(int(&a, 1)?).map(Datum::Int).ok_or_else(|| overflow("multiply")),
    )?;
    reg.add_implementation("multiply", Implementation::composition("multiply_recursive", MULTIPLY_COMPOSITION))?;

    // Strict variant for direct calls; compositions get the lazy form.
    reg.register_builtin(
        FunctionDef::new("if", "any")
            .param("condition", "boolean")
            .param("then", "any")
            .param("else", "any"),
        |_, mut a| {
            let e = a.pop().expect("arity checked");
            let t = a.pop().expect("arity checked");
            Ok(if a[0] == Datum::Bool(true) { t } else { e })
        },
    )?;
    reg.register_builtin(
        FunctionDef::new("equals", "boolean").param("a", "any").param("b", "any").test(&["1", "1"], "true"),
        |_, a| Ok(Datum::Bool(a[0] == a[1])),
    )?;
    reg.register_builtin(FunctionDef::new("not", "boolean").param("b", "boolean"), |_, a| {
        Ok(Datum::Bool(a[0] != Datum::Bool(true)))
    })?;
    reg.register_builtin(
        FunctionDef::new("concat", "list<any>")
            .param("a", "list<any>")
            .param("b", "list<any>")
            .test(&["[1]", "[2, 3]"], "[1, 2, 3]"),
        |_, mut a| {
            let b = list(a.pop().expect("arity checked"))?;
            let mut xs = list(a.pop().expect("arity checked"))?;
            xs.extend(b);
            Ok(Datum::List(xs))
        },
    )?;
    reg.register_builtin(
        FunctionDef::new("map", "list<any>")
            .param("function", "text")
            .param("values", "list<any>")
            .test(&["\"is_zero\"", "[0, 1]"], "[true, false]"),
        |ev: &Evaluator<'_, E>, mut a| {
            let xs = list(a.pop().expect("arity checked"))?;
            let f = a[0].as_text().unwrap_or_default().to_string();
            xs.into_iter().map(|x| ev.call(&f, vec![x])).collect::<Result<_, _>>().map(Datum::List)
        },
    )?;
    reg.register_builtin(
        FunctionDef::new("join", "text")
            .param("values", "list<text>")
            .param("separator", "text")
            .test(&["[\"a\", \"b\"]", "\"-\""], "\"a-b\""),
        |_, mut a| {
            let sep = a.pop().expect("arity checked");
            let parts = list(a.pop().expect("arity checked"))?;
            let parts: Vec<&str> = parts.iter().filter_map(Datum::as_text).collect();
            Ok(Datum::text(parts.join(sep.as_text().unwrap_or_default())))
        },
    )?;
    reg.register_builtin(
        FunctionDef::new("length", "positive_integer").param("values", "list<any>"),
        |_, a| match &a[0] {
            Datum::List(xs) => Ok(Datum::Int(xs.len() as i64)),
            other => Err(EvalError::TypeError(format!("expected a list, got {other}"))),
        },
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{EvalOptions, RegistryConfig};

    fn registry() -> Registry<()> {
        let mut r = Registry::new(RegistryConfig::default());
        install(&mut r).unwrap();
        r
    }

    fn call(r: &Registry<()>, f: &str, args: &[i64], opts: &EvalOptions) -> Result<Datum, EvalError> {
        r.evaluate(&(), f, args.iter().map(|&n| Datum::Int(n)).collect(), opts)
    }

    #[test]
    fn composition_base_case() {
        let r = registry();
        let opts = EvalOptions::default().pin("multiply", "multiply_recursive");
        assert_eq!(call(&r, "multiply", &[0, 7], &opts), Ok(Datum::Int(0)));
        assert_eq!(call(&r, "multiply", &[3, 4], &opts), Ok(Datum::Int(12)));
        assert_eq!(call(&r, "subtract", &[1, 2], &opts), Ok(Datum::Int(0)));
    }

    #[test]
    fn type_errors() {
        let r = registry();
        let opts = EvalOptions::default();
        assert_eq!(call(&r, "multiply", &[-1, 2], &opts).unwrap_err().code(), "TYPE_ERROR");
        assert_eq!(call(&r, "multiply", &[1], &opts).unwrap_err().code(), "TYPE_ERROR");
        assert_eq!(call(&r, "froz", &[1], &opts).unwrap_err().code(), "UNKNOWN_FUNCTION");
        assert_eq!(
            r.evaluate(&(), "add", vec![Datum::text("1"), Datum::Int(1)], &opts).unwrap_err().code(),
            "TYPE_ERROR"
        );
    }

    #[test]
    fn depth_limit() {
        let r = registry();
        let opts = EvalOptions::default().pin("multiply", "multiply_recursive").no_cache().depth_limit(20);
        assert_eq!(call(&r, "multiply", &[21, 1], &opts), Err(EvalError::DepthExceeded(20)));
        assert_eq!(call(&r, "multiply", &[18, 1], &opts), Ok(Datum::Int(18)));
    }

    #[test]
    fn builtin_tests_pass() {
        let r = registry();
        for f in ["is_natural", "is_zero", "add", "subtract", "multiply", "equals", "concat", "map", "join"] {
            let report = r.run_tests(&(), f).unwrap();
            for imp in &report.implementations {
                assert!(imp.all_passed, "{f}/{}: {:?}", imp.implementation, imp.results);
            }
        }
    }

    #[test]
    fn lists() {
        let r = registry();
        let out = r
            .evaluate(
                &(),
                "map",
                vec![Datum::text("is_zero"), Datum::List(vec![Datum::Int(0), Datum::Int(2)])],
                &EvalOptions::default(),
            )
            .unwrap();
        assert_eq!(out, Datum::List(vec![Datum::Bool(true), Datum::Bool(false)]));
    }
}
