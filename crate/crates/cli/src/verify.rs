//! Self-checks behind `ghz verify`.

use ghz_core::linalg::{c, commutes, matmul, real, Matrix, C64, EPS, ZERO};
use ghz_core::quantum::{
    context_operator, expand, format_signs, function_of_operator, lagrange_projectors,
    maximal_operator, product_basis, sign_table, GhzBasis, SignTable, DEFAULT_LAMBDAS,
};
use ghz_core::Context;

pub const CHECKS: [&str; 10] = [
    "operators",
    "commute",
    "product",
    "projectors",
    "sign-table",
    "sign-table-permuted",
    "expand-u1",
    "expand-u8",
    "maximal-operator",
    "orthonormal",
];

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn run(name: &'static str) -> CheckResult {
    let outcome = match name {
        "operators" => operators(),
        "commute" => commute(),
        "product" => product(),
        "projectors" => projectors(),
        "sign-table" => table(GhzBasis::standard()),
        "sign-table-permuted" => table(GhzBasis::permuted()),
        "expand-u1" => expand_u1(),
        "expand-u8" => expand_u8(),
        "maximal-operator" => maximal(),
        "orthonormal" => orthonormal(),
        _ => Err(format!("unknown check {name}")),
    };
    match outcome {
        Ok(detail) => CheckResult { name, passed: true, detail },
        Err(detail) => CheckResult { name, passed: false, detail },
    }
}

type Check = Result<String, String>;

fn operators() -> Check {
    for ctx in Context::ghz() {
        let op = context_operator(&ctx);
        if !op.is_antidiagonal(EPS) || !op.is_involutory(EPS) || !op.is_hermitian(EPS) {
            return Err(format!("{ctx} is not a real antidiagonal involution"));
        }
    }
    Ok("yyx, yxy, xyy, xxx are antidiagonal involutions".into())
}

fn commute() -> Check {
    let ops: Vec<Matrix> = Context::ghz().iter().map(context_operator).collect();
    for a in 0..ops.len() {
        for b in a + 1..ops.len() {
            if !commutes(&ops[a], &ops[b], EPS).map_err(|e| e.to_string())? {
                return Err(format!("operators {} and {} do not commute", a + 1, b + 1));
            }
        }
    }
    Ok("all six pairs commute".into())
}

fn product() -> Check {
    let mut acc = Matrix::identity(8);
    for ctx in Context::ghz() {
        acc = matmul(&acc, &context_operator(&ctx)).map_err(|e| e.to_string())?;
    }
    if acc.approx_eq(&Matrix::identity(8).scale(real(-1.0)), EPS) {
        Ok("product of four operators = −I".into())
    } else {
        Err("product of four operators differs from −I".into())
    }
}

fn projectors() -> Check {
    for ctx in Context::ghz() {
        let (plus, minus) = lagrange_projectors(&context_operator(&ctx)).map_err(|e| e.to_string())?;
        for p in [plus, minus] {
            if !p.is_projector(EPS) || (p.trace() - real(4.0)).norm() > EPS {
                return Err(format!("{ctx}: Lagrange projector fails idempotence or trace 4"));
            }
        }
    }
    Ok("E± idempotent, Hermitian, trace 4".into())
}

fn table(basis: GhzBasis) -> Check {
    let found = sign_table(&basis).map_err(|e| e.to_string())?;
    if found == SignTable::reference() {
        Ok(format!("\n{found}"))
    } else {
        Err(format!("{:?} basis gives\n{found}", basis.variant))
    }
}

fn check_terms(u: usize, context: &str, terms: &[(&str, C64)]) -> Result<(), String> {
    let basis = GhzBasis::standard();
    let ctx: Context = context.parse().map_err(|e: ghz_core::Error| e.to_string())?;
    let coeffs = expand(basis.upsilon(u), &product_basis(&ctx)).map_err(|e| e.to_string())?;
    for (outcome, z) in coeffs {
        let label = format_signs(&outcome);
        let want = terms.iter().find(|(o, _)| *o == label).map_or(ZERO, |t| t.1);
        if (z - want).norm() > EPS {
            return Err(format!("U{u} in {context}: coefficient of {label} is {z}, expected {want}"));
        }
    }
    Ok(())
}

fn expand_u1() -> Check {
    let h = real(0.5);
    check_terms(1, "xxx", &[("+++", h), ("+--", h), ("-+-", h), ("--+", h)])?;
    for ctx in ["xyy", "yxy", "yyx"] {
        check_terms(1, ctx, &[("---", h), ("-++", h), ("+-+", h), ("++-", h)])?;
    }
    Ok("U1 expands with coefficients 1/2 in all four contexts".into())
}

fn expand_u8() -> Check {
    let h = real(0.5);
    let mi = c(0.0, -0.5);
    check_terms(8, "xxx", &[("++-", -h), ("+-+", -h), ("---", h), ("-++", h)])?;
    check_terms(8, "xyy", &[("-+-", h), ("--+", h), ("+--", -h), ("+++", -h)])?;
    check_terms(8, "yxy", &[("---", mi), ("++-", -mi), ("-++", mi), ("+-+", -mi)])?;
    check_terms(8, "yyx", &[("---", mi), ("+-+", -mi), ("-++", mi), ("++-", -mi)])?;
    Ok("U8 expansions match".into())
}

/// Each context operator is a function of the maximal operator R, computed
/// once spectrally and once as a polynomial in R.
fn maximal() -> Check {
    let basis = GhzBasis::standard();
    let r = maximal_operator(&basis, &DEFAULT_LAMBDAS).map_err(|e| e.to_string())?;
    let table = SignTable::reference();
    for (k, ctx) in Context::ghz().iter().enumerate() {
        let values: Vec<f64> = table.column(k).iter().map(|s| f64::from(s.value())).collect();
        let poly = function_of_operator(&r, &DEFAULT_LAMBDAS, &values).map_err(|e| e.to_string())?;
        let spectral = basis.spectral_sum(&values).map_err(|e| e.to_string())?;
        let op = context_operator(ctx);
        if !poly.approx_eq(&op, 1e-7) || !spectral.approx_eq(&op, EPS) {
            return Err(format!("{ctx} is not recovered from R"));
        }
    }
    Ok("all four operators recovered as f(R)".into())
}

fn orthonormal() -> Check {
    for basis in [GhzBasis::standard(), GhzBasis::permuted()] {
        if !basis.gram().approx_eq(&Matrix::identity(8), EPS) {
            return Err(format!("{:?} basis is not orthonormal", basis.variant));
        }
    }
    Ok("Gram matrix = I for both bases".into())
}
