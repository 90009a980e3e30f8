//! Closed-form evaluation for the reference datasets.
//!
//! An expression is a `;`-separated list: the first item is the value, later items are
//! `name = expr` bindings it may use. Bindings are evaluated last to first, so a binding
//! may refer to any binding that follows it. `E` can be supplied by the caller.

use crate::error::{Error, Result};

/// Evaluates a closed form such as `(9+sqrt(33))/12` or
/// `2/(65*t); t = sqrt(3/(133 - 1495/s + 65*s)); s = (629 + 48*sqrt(177))^(1/3)`.
pub fn eval_closed_form(expr: &str, energy: Option<f64>) -> Result<f64> {
    let mut parts = expr.split(';').map(str::trim);
    let head = parts.next().unwrap_or_default();
    let bindings: Vec<&str> = parts.collect();
    let mut ctx = meval::Context::new();
    if let Some(e) = energy {
        ctx.var("E", e);
    }
    for binding in bindings.iter().rev() {
        let (name, body) = binding
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("malformed binding `{binding}` in `{expr}`")))?;
        let v = eval_in(body, &ctx, expr)?;
        ctx.var(name.trim(), v);
    }
    eval_in(head, &ctx, expr)
}

fn eval_in(body: &str, ctx: &meval::Context, whole: &str) -> Result<f64> {
    let v = meval::eval_str_with_context(body, ctx)
        .map_err(|e| Error::InvalidArgument(format!("cannot evaluate `{whole}`: {e}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!("`{whole}` is not finite")))
    }
}
