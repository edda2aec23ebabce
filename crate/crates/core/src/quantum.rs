//! GHZ operators, the GHZ eigenbasis, product measurement bases, and Born-rule
//! statistics.
//!
//! Party 1 is the leftmost (most significant) tensor factor, so `yyx` means
//! `sigma_y (x) sigma_y (x) sigma_x`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, inner, matmul, real, tensor_all, Matrix, Vector, C64, EPS, I, ONE, ZERO};

/// The reproducible generator used by every sampling routine.
pub type SimRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A dichotomic outcome, `+1` or `-1`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_symbol(ch: char) -> Option<Sign> {
        match ch {
            '+' => Some(Sign::Plus),
            // ASCII hyphen and the typographic minus
            '-' | '\u{2212}' => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn product<I: IntoIterator<Item = Sign>>(signs: I) -> Sign {
        signs.into_iter().fold(Sign::Plus, |acc, s| acc * s)
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Parse a string such as `"---+"` into signs.
pub fn parse_signs(s: &str) -> Option<Vec<Sign>> {
    s.chars().map(Sign::from_symbol).collect()
}

pub fn format_signs(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.symbol()).collect()
}

/// One of the two dichotomic single-party observables.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Observable {
    X,
    Y,
}

impl Observable {
    pub fn symbol(self) -> char {
        match self {
            Observable::X => 'x',
            Observable::Y => 'y',
        }
    }

    pub fn operator(self) -> Matrix {
        match self {
            Observable::X => linalg::sigma_x(),
            Observable::Y => linalg::sigma_y(),
        }
    }

    /// `|x_pm> = (1, pm 1)/sqrt2`, `|y_pm> = (1, pm i)/sqrt2`.
    pub fn eigenvector(self, sign: Sign) -> Vector {
        let s = real(f64::from(sign.value()));
        let second = match self {
            Observable::X => s,
            Observable::Y => s * I,
        };
        Vector::new(vec![ONE, second]).scale(real(FRAC_1_SQRT_2))
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// An ordered list of per-party observables, e.g. `yyx`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context(Vec<Observable>);

impl Context {
    pub fn new(observables: Vec<Observable>) -> Result<Self> {
        if !(2..=3).contains(&observables.len()) {
            let label: String = observables.iter().map(|o| o.symbol()).collect();
            return Err(Error::InvalidContext(label));
        }
        Ok(Context(observables))
    }

    /// The four three-party GHZ contexts in sign-table column order.
    pub fn ghz() -> [Context; 4] {
        ["yyx", "yxy", "xyy", "xxx"].map(|s| s.parse().expect("static label"))
    }

    /// The four two-party contexts of the stranger-than-quantum game.
    pub fn two_party() -> [Context; 4] {
        ["xx", "xy", "yx", "yy"].map(|s| s.parse().expect("static label"))
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    pub fn observables(&self) -> &[Observable] {
        &self.0
    }

    /// Render an outcome tuple as `x+y-y+`.
    pub fn outcome_label(&self, outcome: &[Sign]) -> String {
        self.0
            .iter()
            .zip(outcome)
            .flat_map(|(o, s)| [o.symbol(), s.symbol()])
            .collect()
    }
}

impl FromStr for Context {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let obs = s
            .chars()
            .map(|ch| match ch.to_ascii_lowercase() {
                'x' => Ok(Observable::X),
                'y' => Ok(Observable::Y),
                _ => Err(Error::InvalidContext(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Context::new(obs).map_err(|_| Error::InvalidContext(s.to_string()))
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.0 {
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

impl Serialize for Context {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Spin observable along polar angle `theta` and azimuth `phi`.
pub fn pauli(theta: f64, phi: f64) -> Matrix {
    let (s, c) = theta.sin_cos();
    let phase = C64::from_polar(1.0, phi);
    Matrix::from_rows(&[
        vec![real(c), phase.conj() * s],
        vec![phase * s, real(-c)],
    ])
}

/// Which GHZ eigenbasis (and matching observables) is in use.
///
/// `Permuted` replaces the leading `1` of every GHZ vector by `i`. That
/// substitution is the unitary `diag(i, 1)` acting on party 1, so party 1's
/// observables are conjugated by the same unitary (`x -> -sigma_y`,
/// `y -> sigma_x`) and the sign table is unchanged.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GhzVariant {
    #[default]
    Standard,
    Permuted,
}

impl GhzVariant {
    /// Local unitary applied to party `party` (0-based).
    pub fn party_unitary(self, party: usize) -> Matrix {
        match (self, party) {
            (GhzVariant::Permuted, 0) => Matrix::diag(&[I, ONE]),
            _ => Matrix::identity(2),
        }
    }

    pub fn local_operator(self, party: usize, obs: Observable) -> Matrix {
        let u = self.party_unitary(party);
        &(&u * &obs.operator()) * &u.adjoint()
    }

    pub fn local_eigenvector(self, party: usize, obs: Observable, sign: Sign) -> Vector {
        let v = self
            .party_unitary(party)
            .apply(&obs.eigenvector(sign))
            .expect("2x2 times 2-vector");
        fix_phase(&v)
    }

    pub fn context_operator(self, ctx: &Context) -> Matrix {
        let factors: Vec<Matrix> = ctx
            .observables()
            .iter()
            .enumerate()
            .map(|(p, &o)| self.local_operator(p, o))
            .collect();
        tensor_all(&factors)
    }
}

/// Rotate the global phase so the first nonzero entry is real and positive.
fn fix_phase(v: &Vector) -> Vector {
    match v.entries().iter().find(|z| z.norm() > EPS) {
        Some(z) => v.scale(z.conj() / z.norm()),
        None => v.clone(),
    }
}

/// Tensor product of `sigma_x` / `sigma_y` per label.
pub fn context_operator(ctx: &Context) -> Matrix {
    GhzVariant::Standard.context_operator(ctx)
}

/// Spectral projectors `E_pm = (1 pm A)/2` of an involutory operator.
pub fn lagrange_projectors(op: &Matrix) -> Result<(Matrix, Matrix)> {
    if !op.is_square() {
        return Err(Error::NotSquare);
    }
    let id = Matrix::identity(op.rows());
    let defect = matmul(op, op)?.max_abs_diff(&id)?;
    if defect > EPS {
        return Err(Error::NotInvolutory(defect));
    }
    let half = real(0.5);
    Ok(((&id + op).scale(half), (&id - op).scale(half)))
}

/// The eight GHZ vectors `|U_1> .. |U_8>`.
#[derive(Clone, Debug, PartialEq)]
pub struct GhzBasis {
    pub variant: GhzVariant,
    pub vectors: Vec<Vector>,
}

pub fn ghz_basis(variant: GhzVariant) -> GhzBasis {
    let h = FRAC_1_SQRT_2;
    let mut vectors = Vec::with_capacity(8);
    // |U_{2k+1}>, |U_{2k+2}> = (|a> pm |7-a>)/sqrt2 with a the k-th index
    for a in 0..4 {
        for s in [1.0, -1.0] {
            let mut data = vec![ZERO; 8];
            data[a] = real(h);
            data[7 - a] = real(s * h);
            if variant == GhzVariant::Permuted {
                data[a] = I * h;
            }
            vectors.push(Vector::new(data));
        }
    }
    GhzBasis { variant, vectors }
}

impl GhzBasis {
    pub fn standard() -> Self {
        ghz_basis(GhzVariant::Standard)
    }

    pub fn permuted() -> Self {
        ghz_basis(GhzVariant::Permuted)
    }

    /// 1-based access matching the `U_i` numbering.
    pub fn upsilon(&self, i: usize) -> &Vector {
        &self.vectors[i - 1]
    }

    pub fn context_operator(&self, ctx: &Context) -> Matrix {
        self.variant.context_operator(ctx)
    }

    pub fn gram(&self) -> Matrix {
        let n = self.vectors.len();
        let mut data = Vec::with_capacity(n * n);
        for a in &self.vectors {
            for b in &self.vectors {
                data.push(inner(a, b).expect("equal dims"));
            }
        }
        Matrix::from_vec(n, n, data)
    }

    /// `sum_i values[i] |U_i><U_i|`
    pub fn spectral_sum(&self, values: &[f64]) -> Result<Matrix> {
        if values.len() != self.vectors.len() {
            return Err(Error::DimensionMismatch {
                left: values.len(),
                right: self.vectors.len(),
            });
        }
        let mut acc = Matrix::zeros(8, 8);
        for (v, &lambda) in self.vectors.iter().zip(values) {
            acc = &acc + &v.outer(v).scale(real(lambda));
        }
        Ok(acc)
    }

    pub fn product_basis(&self, ctx: &Context) -> ProductBasis {
        product_basis_for(self.variant, ctx)
    }
}

/// Closed form of `sum_i alpha_i |U_i>` in the standard basis.
pub fn general_state(alpha: &[C64; 8]) -> Vector {
    let h = real(FRAC_1_SQRT_2);
    let a = |i: usize| alpha[i - 1];
    Vector::new(
        vec![
            a(1) + a(2),
            a(3) + a(4),
            a(5) + a(6),
            a(7) + a(8),
            a(7) - a(8),
            a(5) - a(6),
            a(3) - a(4),
            a(1) - a(2),
        ]
        .into_iter()
        .map(|z| h * z)
        .collect(),
    )
}

/// Eigenvalue signs of the GHZ vectors under the four context operators.
/// Rows follow `U_1 .. U_8`, columns follow [`Context::ghz`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignTable {
    pub entries: [[Sign; 4]; 8],
}

impl SignTable {
    /// The reference table, rows written as `yyx yxy xyy xxx`.
    pub fn reference() -> Self {
        const ROWS: [&str; 8] = [
            "---+", "+++-", "-+++", "+---", "+-++", "-+--", "++-+", "--+-",
        ];
        let mut entries = [[Sign::Plus; 4]; 8];
        for (row, s) in entries.iter_mut().zip(ROWS) {
            let signs = parse_signs(s).expect("static table");
            row.copy_from_slice(&signs);
        }
        SignTable { entries }
    }

    /// 0-based row index whose signs equal `targets`.
    pub fn find_row(&self, targets: &[Sign]) -> Option<usize> {
        self.entries.iter().position(|row| row[..] == *targets)
    }

    pub fn get(&self, row: usize, col: usize) -> Sign {
        self.entries[row][col]
    }

    pub fn column(&self, col: usize) -> [Sign; 8] {
        std::array::from_fn(|r| self.entries[r][col])
    }
}

impl fmt::Display for SignTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "     ")?;
        for ctx in Context::ghz() {
            write!(f, " {ctx}")?;
        }
        for (i, row) in self.entries.iter().enumerate() {
            write!(f, "\nU{}   ", i + 1)?;
            for s in row {
                write!(f, "   {s}")?;
            }
        }
        Ok(())
    }
}

/// Eigenvalue `s` with `op v = s v`, or `None` if `v` is not an eigenvector
/// with eigenvalue `pm 1`. The phase reference is the largest-modulus entry.
pub fn eigen_sign(op: &Matrix, v: &Vector, tol: f64) -> Result<Option<Sign>> {
    let w = op.apply(v)?;
    let k = v.argmax_modulus();
    if v[k].norm() <= tol {
        return Ok(None);
    }
    let ratio = w[k] / v[k];
    let sign = if (ratio - ONE).norm() <= tol {
        Sign::Plus
    } else if (ratio + ONE).norm() <= tol {
        Sign::Minus
    } else {
        return Ok(None);
    };
    let expected = v.scale(real(f64::from(sign.value())));
    Ok(w.approx_eq(&expected, tol).then_some(sign))
}

pub fn sign_table(basis: &GhzBasis) -> Result<SignTable> {
    let mut entries = [[Sign::Plus; 4]; 8];
    for (col, ctx) in Context::ghz().iter().enumerate() {
        let op = basis.context_operator(ctx);
        for (i, v) in basis.vectors.iter().enumerate() {
            entries[i][col] = eigen_sign(&op, v, EPS)?.ok_or_else(|| Error::NotEigenvector {
                index: i + 1,
                context: ctx.to_string(),
            })?;
        }
    }
    Ok(SignTable { entries })
}

/// One measurement outcome of a product basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub outcome: Vec<Sign>,
    pub vector: Vector,
}

impl BasisElement {
    pub fn product(&self) -> Sign {
        Sign::product(self.outcome.iter().copied())
    }
}

/// The joint eigenbasis of a context: all tensor products of local
/// eigenvectors, in lexicographic outcome order (`+` before `-`).
#[derive(Clone, Debug, PartialEq)]
pub struct ProductBasis {
    pub context: Context,
    pub elements: Vec<BasisElement>,
}

impl ProductBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn find(&self, outcome: &[Sign]) -> Option<&BasisElement> {
        self.elements.iter().find(|e| e.outcome == outcome)
    }
}

pub fn product_basis(ctx: &Context) -> ProductBasis {
    product_basis_for(GhzVariant::Standard, ctx)
}

pub fn product_basis_for(variant: GhzVariant, ctx: &Context) -> ProductBasis {
    let mut outcomes: Vec<Vec<Sign>> = vec![vec![]];
    for _ in 0..ctx.parties() {
        outcomes = outcomes
            .into_iter()
            .flat_map(|prefix| {
                Sign::BOTH.map(|s| {
                    let mut next = prefix.clone();
                    next.push(s);
                    next
                })
            })
            .collect();
    }
    let elements = outcomes
        .into_iter()
        .map(|outcome| {
            let vector = ctx
                .observables()
                .iter()
                .zip(&outcome)
                .enumerate()
                .map(|(p, (&o, &s))| variant.local_eigenvector(p, o, s))
                .reduce(|acc, v| acc.tensor(&v))
                .expect("at least two parties");
            BasisElement { outcome, vector: fix_phase(&vector) }
        })
        .collect();
    ProductBasis { context: ctx.clone(), elements }
}

/// Coefficients `<b_k|state>` for every basis element.
pub fn expand(state: &Vector, basis: &ProductBasis) -> Result<Vec<(Vec<Sign>, C64)>> {
    basis
        .elements
        .iter()
        .map(|e| Ok((e.outcome.clone(), inner(&e.vector, state)?)))
        .collect()
}

/// `sum_k c_k |b_k>`
pub fn reconstruct(coefficients: &[(Vec<Sign>, C64)], basis: &ProductBasis) -> Result<Vector> {
    let mut acc = Vector::zeros(basis.elements[0].vector.dim());
    for (outcome, coeff) in coefficients {
        let element = basis.find(outcome).ok_or_else(|| {
            Error::InvalidContext(format!("{} has no outcome {}", basis.context, format_signs(outcome)))
        })?;
        acc = linalg::scale_add(ONE, &acc, *coeff, &element.vector)?;
    }
    Ok(acc)
}

pub fn born_probabilities(state: &Vector, basis: &ProductBasis) -> Result<Vec<(Vec<Sign>, f64)>> {
    if !state.is_unit(EPS) {
        return Err(Error::NotNormalized(state.norm_sqr()));
    }
    Ok(expand(state, basis)?
        .into_iter()
        .map(|(o, c)| (o, c.norm_sqr()))
        .collect())
}

/// Draw an index with probability proportional to `weights`.
pub(crate) fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let u = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = k;
        if u < acc {
            return k;
        }
    }
    last
}

pub fn sample_outcome<R: Rng + ?Sized>(
    state: &Vector,
    basis: &ProductBasis,
    rng: &mut R,
) -> Result<Vec<Sign>> {
    let probs = born_probabilities(state, basis)?;
    let weights: Vec<f64> = probs.iter().map(|(_, p)| *p).collect();
    let k = sample_index(&weights, rng);
    Ok(probs[k].0.clone())
}

/// `R = sum_i lambda_i |U_i><U_i|` for pairwise distinct `lambda_i`.
pub fn maximal_operator(basis: &GhzBasis, lambdas: &[f64]) -> Result<Matrix> {
    check_distinct(lambdas)?;
    basis.spectral_sum(lambdas)
}

pub const DEFAULT_LAMBDAS: [f64; 8] = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];

fn check_distinct(lambdas: &[f64]) -> Result<()> {
    for (k, a) in lambdas.iter().enumerate() {
        if lambdas[k + 1..].iter().any(|b| (a - b).abs() <= EPS) {
            return Err(Error::RepeatedEigenvalue(*a));
        }
    }
    Ok(())
}

/// `f(R)` for the function with `f(lambdas[i]) = values[i]`, evaluated as the
/// Lagrange interpolation polynomial in `R` (no eigenvectors used).
pub fn function_of_operator(r: &Matrix, lambdas: &[f64], values: &[f64]) -> Result<Matrix> {
    check_distinct(lambdas)?;
    if lambdas.len() != values.len() {
        return Err(Error::DimensionMismatch { left: lambdas.len(), right: values.len() });
    }
    let n = r.rows();
    let id = Matrix::identity(n);
    let mut acc = Matrix::zeros(n, n);
    for (i, (&li, &vi)) in lambdas.iter().zip(values).enumerate() {
        let mut term = id.scale(real(vi));
        for (j, &lj) in lambdas.iter().enumerate() {
            if i != j {
                let factor = (r - &id.scale(real(lj))).scale(real(1.0 / (li - lj)));
                term = matmul(&term, &factor)?;
            }
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Value alphabet for a single party's outcome.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ValueSet {
    ZeroOne,
    PlusMinusOne,
}

impl ValueSet {
    pub fn values(self) -> &'static [i64] {
        match self {
            ValueSet::ZeroOne => &[0, 1],
            ValueSet::PlusMinusOne => &[-1, 1],
        }
    }
}

/// Shannon entropy (bits) of the product of three independent uniform picks.
pub fn outcome_entropy(set: ValueSet) -> f64 {
    product_entropy(set.values(), 3)
}

/// Entropy of the product of `parties` independent uniform picks from `values`.
pub fn product_entropy(values: &[i64], parties: usize) -> f64 {
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    let mut tuple = vec![0usize; parties];
    let total = values.len().pow(parties as u32);
    for _ in 0..total {
        let product: i64 = tuple.iter().map(|&k| values[k]).product();
        *counts.entry(product).or_default() += 1;
        for slot in tuple.iter_mut() {
            *slot += 1;
            if *slot < values.len() {
                break;
            }
            *slot = 0;
        }
    }
    counts
        .values()
        .map(|&n| n as f64 / total as f64)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn ctx(s: &str) -> Context {
        s.parse().unwrap()
    }

    fn signs(s: &str) -> Vec<Sign> {
        parse_signs(s).unwrap()
    }

    #[test]
    fn pauli_spherical_form() {
        assert!(pauli(FRAC_PI_2, 0.0).approx_eq(&linalg::sigma_x(), EPS));
        assert!(pauli(FRAC_PI_2, FRAC_PI_2).approx_eq(&linalg::sigma_y(), EPS));
        assert!(pauli(0.0, 0.0).approx_eq(&linalg::sigma_z(), EPS));
        let m = pauli(1.1, 4.0);
        assert!(m.is_hermitian(EPS));
        assert!(m.is_involutory(EPS));
        assert!(pauli(PI, 1.0).approx_eq(&linalg::sigma_z().scale(real(-1.0)), EPS));
    }

    #[test]
    fn context_operator_antidiagonals() {
        let cases = [
            ("yyx", [-1., -1., 1., 1., 1., 1., -1., -1.]),
            ("yxy", [-1., 1., -1., 1., 1., -1., 1., -1.]),
            ("xyy", [-1., 1., 1., -1., -1., 1., 1., -1.]),
            ("xxx", [1.; 8]),
        ];
        for (label, diag) in cases {
            let op = context_operator(&ctx(label));
            assert!(op.approx_eq(&Matrix::antidiag_real(&diag), EPS), "{label}");
            assert!(op.is_hermitian(EPS) && op.is_involutory(EPS));
        }
    }

    #[test]
    fn context_parsing() {
        assert_eq!(ctx("YyX").to_string(), "yyx");
        assert!("xz".parse::<Context>().is_err());
        assert!("x".parse::<Context>().is_err());
        assert!("xxxx".parse::<Context>().is_err());
        assert_eq!(ctx("xyy").outcome_label(&signs("+-+")), "x+y-y+");
    }

    #[test]
    fn projectors() {
        let (ep, em) = lagrange_projectors(&Matrix::identity(8)).unwrap();
        assert_eq!(ep, Matrix::identity(8));
        assert_eq!(em, Matrix::zeros(8, 8));

        let (ep, em) = lagrange_projectors(&context_operator(&ctx("xxx"))).unwrap();
        assert!((ep.trace() - real(4.0)).norm() < EPS);
        assert!((em.trace() - real(4.0)).norm() < EPS);
        assert!(matmul(&ep, &em).unwrap().max_abs() < EPS);
        assert!((&ep + &em).approx_eq(&Matrix::identity(8), EPS));

        let basis = GhzBasis::standard();
        let (ep, em) = lagrange_projectors(&context_operator(&ctx("yyx"))).unwrap();
        let u1 = basis.upsilon(1);
        assert!(ep.apply(u1).unwrap().norm() < EPS);
        assert!(em.apply(u1).unwrap().approx_eq(u1, EPS));

        assert!(matches!(
            lagrange_projectors(&linalg::sigma_z().scale(real(2.0))),
            Err(Error::NotInvolutory(_))
        ));
    }

    #[test]
    fn ghz_vectors() {
        let basis = GhzBasis::standard();
        let h = FRAC_1_SQRT_2;
        let mut u1 = [0.0; 8];
        u1[0] = h;
        u1[7] = h;
        assert!(basis.upsilon(1).approx_eq(&Vector::from_real(&u1), EPS));
        let mut u8 = [0.0; 8];
        u8[3] = h;
        u8[4] = -h;
        assert!(basis.upsilon(8).approx_eq(&Vector::from_real(&u8), EPS));
        assert!(basis.gram().approx_eq(&Matrix::identity(8), EPS));
        assert!(GhzBasis::permuted().gram().approx_eq(&Matrix::identity(8), EPS));
        assert_eq!(GhzBasis::permuted().upsilon(1)[0], I * h);
    }

    #[test]
    fn sign_table_rows() {
        let table = sign_table(&GhzBasis::standard()).unwrap();
        assert_eq!(table.entries[0].to_vec(), signs("---+"));
        assert_eq!(table.entries[7].to_vec(), signs("--+-"));
        assert_eq!(table, SignTable::reference());
        assert_eq!(sign_table(&GhzBasis::permuted()).unwrap(), SignTable::reference());
    }

    #[test]
    fn permuted_vectors_are_not_eigenvectors_of_unconjugated_operators() {
        let basis = GhzBasis { variant: GhzVariant::Standard, ..GhzBasis::permuted() };
        assert!(matches!(sign_table(&basis), Err(Error::NotEigenvector { index: 1, .. })));
    }

    #[test]
    fn permuted_party_one_observables() {
        let v = GhzVariant::Permuted;
        assert!(v.local_operator(0, Observable::X).approx_eq(&linalg::sigma_y().scale(real(-1.0)), EPS));
        assert!(v.local_operator(0, Observable::Y).approx_eq(&linalg::sigma_x(), EPS));
        assert!(v.local_operator(1, Observable::Y).approx_eq(&linalg::sigma_y(), EPS));
    }

    #[test]
    fn product_basis_vectors() {
        let n = 1.0 / (2.0 * 2f64.sqrt());
        let xxx = product_basis(&ctx("xxx"));
        assert_eq!(xxx.dim(), 8);
        let e = xxx.find(&signs("+++")).unwrap();
        assert!(e.vector.approx_eq(&Vector::from_real(&[n; 8]), EPS));

        let yyx = product_basis(&ctx("yyx"));
        let expected = Vector::new(
            [ONE, -ONE, I, -I, I, -I, -ONE, ONE].iter().map(|&z| z * n).collect(),
        );
        assert!(yyx.find(&signs("++-")).unwrap().vector.approx_eq(&expected, EPS));

        for basis in [xxx, yyx, product_basis(&ctx("xy"))] {
            for (a, ea) in basis.elements.iter().enumerate() {
                assert!(ea.vector.is_unit(EPS));
                for eb in &basis.elements[a + 1..] {
                    assert!(inner(&ea.vector, &eb.vector).unwrap().norm() < EPS);
                }
            }
        }
        assert_eq!(product_basis(&ctx("yx")).dim(), 4);
    }

    #[test]
    fn expansion_of_u1_in_xxx() {
        let basis = GhzBasis::standard();
        let coeffs = expand(basis.upsilon(1), &product_basis(&ctx("xxx"))).unwrap();
        let support = ["+++", "+--", "-+-", "--+"];
        for (o, c) in &coeffs {
            let expected = if support.contains(&format_signs(o).as_str()) { 0.5 } else { 0.0 };
            assert!((c - real(expected)).norm() < EPS, "{}", format_signs(o));
        }
    }

    #[test]
    fn expansion_of_u8() {
        let basis = GhzBasis::standard();
        let u8 = basis.upsilon(8);
        let xyy = expand(u8, &product_basis(&ctx("xyy"))).unwrap();
        let get = |cs: &[(Vec<Sign>, C64)], o: &str| cs.iter().find(|(s, _)| *s == signs(o)).unwrap().1;
        assert!((get(&xyy, "-+-") - real(0.5)).norm() < EPS);
        assert!((get(&xyy, "--+") - real(0.5)).norm() < EPS);
        assert!((get(&xyy, "+--") - real(-0.5)).norm() < EPS);
        assert!((get(&xyy, "+++") - real(-0.5)).norm() < EPS);

        // -i/2 (|y-x-y-> - |y+x+y-> + |y-x+y+> - |y+x-y+>)
        let yxy = expand(u8, &product_basis(&ctx("yxy"))).unwrap();
        let m = -I * 0.5;
        assert!((get(&yxy, "---") - m).norm() < EPS);
        assert!((get(&yxy, "++-") + m).norm() < EPS);
        assert!((get(&yxy, "-++") - m).norm() < EPS);
        assert!((get(&yxy, "+-+") + m).norm() < EPS);
    }

    #[test]
    fn born_rule() {
        let basis = GhzBasis::standard();
        let probs = born_probabilities(basis.upsilon(1), &product_basis(&ctx("yyx"))).unwrap();
        for (o, p) in &probs {
            let expected = if Sign::product(o.iter().copied()) == Sign::Minus { 0.25 } else { 0.0 };
            assert!((p - expected).abs() < EPS);
        }
        let zzz = Vector::basis(8, 0);
        for (_, p) in born_probabilities(&zzz, &product_basis(&ctx("xxx"))).unwrap() {
            assert!((p - 0.125).abs() < EPS);
        }
        let unnormalized = Vector::from_real(&[1.0; 8]);
        assert!(matches!(
            born_probabilities(&unnormalized, &product_basis(&ctx("xxx"))),
            Err(Error::NotNormalized(_))
        ));
        assert!(born_probabilities(&Vector::basis(4, 0), &product_basis(&ctx("xxx"))).is_err());
    }

    #[test]
    fn sampling_respects_support() {
        let basis = GhzBasis::standard();
        let mut rng = seeded_rng(11);
        for _ in 0..200 {
            let o = sample_outcome(basis.upsilon(1), &product_basis(&ctx("xxx")), &mut rng).unwrap();
            assert_eq!(Sign::product(o), Sign::Plus);
            let o = sample_outcome(basis.upsilon(1), &product_basis(&ctx("xyy")), &mut rng).unwrap();
            assert_eq!(Sign::product(o), Sign::Minus);
        }
    }

    #[test]
    fn sampling_frequencies() {
        let basis = GhzBasis::standard();
        let pb = product_basis(&ctx("xxx"));
        let mut rng = seeded_rng(2024);
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        let draws = 100_000;
        for _ in 0..draws {
            let o = sample_outcome(basis.upsilon(1), &pb, &mut rng).unwrap();
            *counts.entry(format_signs(&o)).or_default() += 1;
        }
        assert_eq!(counts.len(), 4);
        for n in counts.values() {
            assert!((*n as f64 / draws as f64 - 0.25).abs() < 0.01);
        }
    }

    #[test]
    fn maximal_operator_reconstruction() {
        let basis = GhzBasis::standard();
        let r = maximal_operator(&basis, &DEFAULT_LAMBDAS).unwrap();
        for (i, v) in basis.vectors.iter().enumerate() {
            let rv = r.apply(v).unwrap();
            assert!(rv.approx_eq(&v.scale(real(DEFAULT_LAMBDAS[i])), 1e-9));
        }
        let table = sign_table(&basis).unwrap();
        for (col, c) in Context::ghz().iter().enumerate() {
            let values: Vec<f64> = table.column(col).iter().map(|s| f64::from(s.value())).collect();
            let op = context_operator(c);
            assert!(basis.spectral_sum(&values).unwrap().approx_eq(&op, EPS));
            let via_r = function_of_operator(&r, &DEFAULT_LAMBDAS, &values).unwrap();
            assert!(via_r.approx_eq(&op, 1e-8), "{c}");
        }
        let repeated = [1.0, 1.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        assert_eq!(maximal_operator(&basis, &repeated), Err(Error::RepeatedEigenvalue(1.0)));
    }

    #[test]
    fn entropies() {
        assert!((outcome_entropy(ValueSet::PlusMinusOne) - 1.0).abs() < 1e-12);
        let h01 = outcome_entropy(ValueSet::ZeroOne);
        let closed = -(1.0 / 8.0) * (1.0f64 / 8.0).log2() - (7.0 / 8.0) * (7.0f64 / 8.0).log2();
        assert!((h01 - closed).abs() < 1e-12);
        assert!((h01 - 0.5436).abs() < 0.0005);
        assert_eq!(product_entropy(&[1], 3), 0.0);
    }

    #[test]
    fn general_state_closed_form() {
        let basis = GhzBasis::standard();
        let omega = general_state(&[real(1.0 / (2.0 * 2f64.sqrt())); 8]);
        assert!(omega.approx_eq(&Vector::from_real(&[0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0]), EPS));
        let mut alpha = [ZERO; 8];
        alpha[2] = ONE;
        assert!(general_state(&alpha).approx_eq(basis.upsilon(3), EPS));
    }

    #[test]
    fn sign_serde() {
        assert_eq!(serde_json::to_string(&[Sign::Plus, Sign::Minus]).unwrap(), "[1,-1]");
        let back: Vec<Sign> = serde_json::from_str("[-1,1]").unwrap();
        assert_eq!(back, vec![Sign::Minus, Sign::Plus]);
        assert!(serde_json::from_str::<Sign>("0").is_err());
        assert_eq!(parse_signs("+\u{2212}"), Some(vec![Sign::Plus, Sign::Minus]));
    }
}
