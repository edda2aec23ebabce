//! GHZ-type games: specification, classical (noncontextual and contextual),
//! quantum, and PR-box strategies.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, rank, Matrix, Vector, EPS};
use crate::logic::PartitionLogic;
use crate::quantum::{
    born_probabilities, format_signs, parse_signs, product_basis_for, sample_index, Context,
    GhzVariant, Observable, Sign, SignTable,
};

/// Target sign per context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSpec {
    pub contexts: Vec<Context>,
    pub targets: Vec<Sign>,
}

impl GameSpec {
    pub fn new(contexts: Vec<Context>, targets: Vec<Sign>) -> Result<Self> {
        let parties = contexts.first().map(Context::parties);
        if contexts.is_empty()
            || contexts.len() != targets.len()
            || contexts.iter().any(|c| Some(c.parties()) != parties)
        {
            return Err(Error::UnsupportedGame(format!(
                "{} contexts for {} targets",
                contexts.len(),
                targets.len()
            )));
        }
        Ok(GameSpec { contexts, targets })
    }

    /// Three parties, contexts `yyx, yxy, xyy, xxx`.
    pub fn three_party(targets: &[Sign]) -> Result<Self> {
        Self::with_contexts(Context::ghz(), targets)
    }

    /// Two parties, contexts `xx, xy, yx, yy`.
    pub fn two_party(targets: &[Sign]) -> Result<Self> {
        Self::with_contexts(Context::two_party(), targets)
    }

    fn with_contexts(contexts: [Context; 4], targets: &[Sign]) -> Result<Self> {
        if targets.len() != 4 {
            return Err(Error::InvalidTargets(format_signs(targets)));
        }
        GameSpec::new(contexts.to_vec(), targets.to_vec())
    }

    /// Parse a target string such as `"---+"` (three parties).
    pub fn parse_three_party(s: &str) -> Result<Self> {
        Self::three_party(&parse_targets(s)?)
    }

    pub fn parse_two_party(s: &str) -> Result<Self> {
        Self::two_party(&parse_targets(s)?)
    }

    /// The original GHZ game `---+`.
    pub fn ghz() -> Self {
        Self::parse_three_party("---+").expect("static targets")
    }

    pub fn parties(&self) -> usize {
        self.contexts[0].parties()
    }

    pub fn target_string(&self) -> String {
        format_signs(&self.targets)
    }

    fn is_standard_three_party(&self) -> bool {
        self.contexts[..] == Context::ghz()[..]
    }

    fn is_standard_two_party(&self) -> bool {
        self.contexts[..] == Context::two_party()[..]
    }
}

pub fn parse_targets(s: &str) -> Result<Vec<Sign>> {
    match parse_signs(s) {
        Some(signs) if signs.len() == 4 => Ok(signs),
        _ => Err(Error::InvalidTargets(s.to_string())),
    }
}

/// All 16 target patterns in lexicographic order.
pub fn all_target_patterns() -> Vec<Vec<Sign>> {
    crate::logic::lexicographic_outcomes(4)
}

/// Probability with which the ward picks each context.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextDistribution(Vec<f64>);

impl ContextDistribution {
    pub fn uniform(n: usize) -> Self {
        ContextDistribution(vec![1.0 / n as f64; n])
    }

    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > EPS {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(ContextDistribution(weights))
    }

    /// All weight on a single context.
    pub fn point(n: usize, index: usize) -> Self {
        let mut w = vec![0.0; n];
        w[index] = 1.0;
        ContextDistribution(w)
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    fn check_len(&self, g: &GameSpec) -> Result<()> {
        if self.0.len() != g.contexts.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} weights for {} contexts",
                self.0.len(),
                g.contexts.len()
            )));
        }
        Ok(())
    }
}

/// One fixed value per party per observable, used in every context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClassicalStrategy {
    pub x: Vec<Sign>,
    pub y: Vec<Sign>,
}

impl ClassicalStrategy {
    pub fn value(&self, party: usize, obs: Observable) -> Sign {
        match obs {
            Observable::X => self.x[party],
            Observable::Y => self.y[party],
        }
    }

    pub fn outcome(&self, ctx: &Context) -> Vec<Sign> {
        ctx.observables()
            .iter()
            .enumerate()
            .map(|(p, &o)| self.value(p, o))
            .collect()
    }

    pub fn wins(&self, ctx: &Context, target: Sign) -> bool {
        Sign::product(self.outcome(ctx)) == target
    }

    /// Every strategy for `parties` players, `+` before `-`, party-major.
    pub fn all(parties: usize) -> Vec<ClassicalStrategy> {
        crate::logic::lexicographic_outcomes(2 * parties)
            .into_iter()
            .map(|bits| ClassicalStrategy {
                x: bits.iter().step_by(2).copied().collect(),
                y: bits.iter().skip(1).step_by(2).copied().collect(),
            })
            .collect()
    }
}

/// Parity bound: with every observable used an even number of times, a
/// noncontextual assignment can only reach target products whose overall
/// product is `+1`.
pub fn parity_feasible_classically(g: &GameSpec) -> Result<bool> {
    let mut counts: BTreeMap<(usize, Observable), usize> = BTreeMap::new();
    for ctx in &g.contexts {
        for (p, &o) in ctx.observables().iter().enumerate() {
            *counts.entry((p, o)).or_default() += 1;
        }
    }
    if let Some(((p, o), _)) = counts.iter().find(|(_, &n)| n % 2 == 1) {
        return Err(Error::OddMultiplicity(format!("{o} of party {}", p + 1)));
    }
    Ok(Sign::product(g.targets.iter().copied()) == Sign::Plus)
}

/// Every noncontextual strategy with its per-context win flags.
pub fn enumerate_classical(g: &GameSpec) -> Vec<(ClassicalStrategy, Vec<bool>)> {
    ClassicalStrategy::all(g.parties())
        .into_iter()
        .map(|s| {
            let wins = g.contexts.iter().zip(&g.targets).map(|(c, &t)| s.wins(c, t)).collect();
            (s, wins)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalValue {
    pub value: f64,
    /// All strategies attaining the value.
    pub optimal: Vec<ClassicalStrategy>,
}

pub fn classical_value(g: &GameSpec, dist: &ContextDistribution) -> Result<ClassicalValue> {
    dist.check_len(g)?;
    let scored: Vec<(ClassicalStrategy, f64)> = enumerate_classical(g)
        .into_iter()
        .map(|(s, wins)| {
            let v = wins.iter().zip(dist.weights()).filter(|(w, _)| **w).map(|(_, p)| p).sum();
            (s, v)
        })
        .collect();
    let value = scored.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
    let optimal = scored
        .into_iter()
        .filter(|(_, v)| (v - value).abs() <= EPS)
        .map(|(s, _)| s)
        .collect();
    Ok(ClassicalValue { value, optimal })
}

/// Row of the sign table whose signs equal the targets (0-based; the share
/// is `U_{row+1}`).
pub fn quantum_share_for(g: &GameSpec, table: &SignTable) -> Option<usize> {
    if !g.is_standard_three_party() {
        return None;
    }
    table.find_row(&g.targets)
}

/// A shared state measured locally in the `x` / `y` eigenbases.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumStrategy {
    pub share: Vector,
    pub variant: GhzVariant,
}

impl QuantumStrategy {
    pub fn new(share: Vector) -> Result<Self> {
        if !share.is_unit(EPS) {
            return Err(Error::NotNormalized(share.norm_sqr()));
        }
        Ok(QuantumStrategy { share, variant: GhzVariant::Standard })
    }

    pub fn with_variant(mut self, variant: GhzVariant) -> Self {
        self.variant = variant;
        self
    }
}

/// Born probability of winning each context.
pub fn exact_win_probabilities(g: &GameSpec, s: &QuantumStrategy) -> Result<Vec<f64>> {
    g.contexts
        .iter()
        .zip(&g.targets)
        .map(|(ctx, &target)| {
            let probs = born_probabilities(&s.share, &product_basis_for(s.variant, ctx))?;
            Ok(probs
                .iter()
                .filter(|(o, _)| Sign::product(o.iter().copied()) == target)
                .map(|(_, p)| p)
                .sum())
        })
        .collect()
}

/// Exact win probability under the ward's distribution.
pub fn exact_win_rate(g: &GameSpec, s: &QuantumStrategy, dist: &ContextDistribution) -> Result<f64> {
    dist.check_len(g)?;
    Ok(exact_win_probabilities(g, s)?
        .iter()
        .zip(dist.weights())
        .map(|(p, w)| p * w)
        .sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlayReport {
    pub rounds: u64,
    pub plays_by_context: Vec<u64>,
    pub wins_by_context: Vec<u64>,
    pub win_rate: f64,
}

impl PlayReport {
    fn new(contexts: usize) -> Self {
        PlayReport {
            rounds: 0,
            plays_by_context: vec![0; contexts],
            wins_by_context: vec![0; contexts],
            win_rate: 0.0,
        }
    }

    fn record(&mut self, context: usize, won: bool) {
        self.rounds += 1;
        self.plays_by_context[context] += 1;
        self.wins_by_context[context] += u64::from(won);
    }

    fn finish(mut self) -> Self {
        let wins: u64 = self.wins_by_context.iter().sum();
        self.win_rate = if self.rounds == 0 { 0.0 } else { wins as f64 / self.rounds as f64 };
        self
    }
}

fn play<R: Rng + ?Sized>(
    g: &GameSpec,
    rounds: u64,
    dist: &ContextDistribution,
    rng: &mut R,
    mut outcome: impl FnMut(usize, &mut R) -> Result<Vec<Sign>>,
) -> Result<PlayReport> {
    dist.check_len(g)?;
    let mut report = PlayReport::new(g.contexts.len());
    for _ in 0..rounds {
        let k = sample_index(dist.weights(), rng);
        let answers = outcome(k, rng)?;
        report.record(k, Sign::product(answers) == g.targets[k]);
    }
    Ok(report.finish())
}

/// Simulate `rounds` rounds: the ward draws a context, the parties measure
/// their share of the state, and the round is won when the product of the
/// outcomes hits the target.
pub fn play_quantum<R: Rng + ?Sized>(
    g: &GameSpec,
    s: &QuantumStrategy,
    rounds: u64,
    dist: &ContextDistribution,
    rng: &mut R,
) -> Result<PlayReport> {
    let tables = g
        .contexts
        .iter()
        .map(|ctx| {
            let basis = product_basis_for(s.variant, ctx);
            let probs = born_probabilities(&s.share, &basis)?;
            Ok(probs)
        })
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<Vec<f64>> =
        tables.iter().map(|t| t.iter().map(|(_, p)| *p).collect()).collect();
    play(g, rounds, dist, rng, |k, rng| {
        Ok(tables[k][sample_index(&weights[k], rng)].0.clone())
    })
}

/// Outcome per block position for the four horizontal contexts
/// `xxx, xyy, yxy, yyx`: the support of `U_1` in each product basis.
pub const CONTEXTUAL_IDENTIFICATION: [(&str, [&str; 4]); 4] = [
    ("xxx", ["+++", "+--", "-+-", "--+"]),
    ("xyy", ["---", "-++", "+-+", "++-"]),
    ("yxy", ["---", "-++", "+-+", "++-"]),
    // {2,8} sits third in its partition and answers y+y+x-
    ("yyx", ["---", "-++", "++-", "+-+"]),
];

/// Answers of the urn-model strategy: the parties draw `ball`, are told the
/// context, and answer with the outcome identified with the block holding
/// `ball` in that context's partition.
pub fn contextual_classical_strategy(pl: &PartitionLogic, ball: usize, ctx: &Context) -> Result<Vec<Sign>> {
    let label = ctx.to_string();
    let (k, (_, answers)) = CONTEXTUAL_IDENTIFICATION
        .iter()
        .enumerate()
        .find(|(_, (name, _))| *name == label)
        .ok_or_else(|| Error::InvalidContext(label.clone()))?;
    let blocks = pl.contexts.get(k).ok_or(Error::BallNotFound(ball))?;
    let position = blocks
        .iter()
        .position(|b| b.contains(&ball))
        .ok_or(Error::BallNotFound(ball))?;
    let answer = answers.get(position).ok_or(Error::BallNotFound(ball))?;
    Ok(parse_signs(answer).expect("static identification"))
}

/// Play the urn-model strategy: a uniformly random ball per round, context
/// disclosed to the parties.
pub fn play_contextual<R: Rng + ?Sized>(
    g: &GameSpec,
    pl: &PartitionLogic,
    rounds: u64,
    dist: &ContextDistribution,
    rng: &mut R,
) -> Result<PlayReport> {
    play(g, rounds, dist, rng, |k, rng| {
        let ball = rng.gen_range(1..=pl.state_count);
        contextual_classical_strategy(pl, ball, &g.contexts[k])
    })
}

/// Local `x_+` and `y_+` vectors of a two-party realization; the `-` vectors
/// are the orthocomplements `(conj b, -conj a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalBases {
    pub x_plus: Vector,
    pub y_plus: Vector,
}

impl LocalBases {
    /// `x_+ = (1, 0)`, `y_+ = (1, 1)/sqrt2`.
    pub fn standard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        LocalBases { x_plus: Vector::basis(2, 0), y_plus: Vector::from_real(&[h, h]) }
    }

    /// `x_+ = (1, 0)`, `y_+ = (1, i)/sqrt2`.
    pub fn circular() -> Self {
        LocalBases {
            x_plus: Vector::basis(2, 0),
            y_plus: Observable::Y.eigenvector(Sign::Plus),
        }
    }

    /// `x` and `y` measured in the same basis.
    pub fn coinciding() -> Self {
        LocalBases { x_plus: Vector::basis(2, 0), y_plus: Vector::basis(2, 0) }
    }

    pub fn vector(&self, obs: Observable, sign: Sign) -> Vector {
        let plus = match obs {
            Observable::X => &self.x_plus,
            Observable::Y => &self.y_plus,
        };
        match sign {
            Sign::Plus => plus.clone(),
            Sign::Minus => Vector::new(vec![plus[1].conj(), -plus[0].conj()]),
        }
    }
}

/// One orthogonality constraint `<psi|v> = 0` for a losing outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub context: Context,
    pub outcome: Vec<Sign>,
    pub vector: Vector,
}

/// Losing outcomes of a two-party game as product vectors. A perfect quantum
/// strategy needs a state orthogonal to all of them.
pub fn losing_constraints(g: &GameSpec, bases: &LocalBases) -> Result<Vec<Constraint>> {
    if g.parties() != 2 {
        return Err(Error::UnsupportedGame("constraint system needs two parties".into()));
    }
    let mut out = Vec::new();
    for (ctx, &target) in g.contexts.iter().zip(&g.targets) {
        for outcome in crate::logic::lexicographic_outcomes(2) {
            if Sign::product(outcome.iter().copied()) == target {
                continue;
            }
            let obs = ctx.observables();
            let vector = bases.vector(obs[0], outcome[0]).tensor(&bases.vector(obs[1], outcome[1]));
            out.push(Constraint { context: ctx.clone(), outcome, vector });
        }
    }
    Ok(out)
}

/// Rows are the conjugated constraint vectors, so `M psi = 0` states
/// `<v|psi> = 0` for every row.
pub fn constraint_matrix(constraints: &[Constraint]) -> Result<Matrix> {
    let rows: Vec<Vector> = constraints.iter().map(|c| c.vector.conj()).collect();
    Matrix::from_row_vectors(&rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfeasibilityCertificate {
    pub infeasible: bool,
    pub rank: usize,
    pub constraints: usize,
    pub unknowns: usize,
}

impl InfeasibilityCertificate {
    pub fn from_constraints(constraints: &[Constraint]) -> Result<Self> {
        let m = constraint_matrix(constraints)?;
        let r = rank(&m, EPS);
        Ok(InfeasibilityCertificate {
            infeasible: r == m.cols(),
            rank: r,
            constraints: m.rows(),
            unknowns: m.cols(),
        })
    }
}

/// Whether no two-party state wins `g` perfectly with the given local bases.
pub fn quantum_infeasibility(g: &GameSpec, bases: &LocalBases) -> Result<InfeasibilityCertificate> {
    InfeasibilityCertificate::from_constraints(&losing_constraints(g, bases)?)
}

/// The eight constraints `psi` orthogonal to x+x+, x-x-, x+y+, x-y-, y+x+,
/// y-x-, y+y-, y-y+ with `x_+ = (1,0)` and `y_+ = (1,1)/sqrt2`.
pub fn stranger_quantum_infeasible() -> InfeasibilityCertificate {
    let g = GameSpec::parse_two_party("---+").expect("static targets");
    quantum_infeasibility(&g, &LocalBases::standard()).expect("two-party game")
}

/// A nonlocal box with `o1 xor o2 = i1 and i2` and uniform marginals.
pub fn pr_box<R: Rng + ?Sized>(i1: bool, i2: bool, rng: &mut R) -> (bool, bool) {
    let o1: bool = rng.gen();
    (o1, o1 ^ (i1 & i2))
}

/// Inputs `x -> 0`, `y -> 1`; outputs `0 -> +1`, `1 -> -1`; `flip` negates
/// the outputs of one party (0-based).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PrBoxStrategy {
    pub flip: Option<usize>,
}

impl PrBoxStrategy {
    pub fn answers(&self, outputs: (bool, bool)) -> Vec<Sign> {
        [outputs.0, outputs.1]
            .iter()
            .enumerate()
            .map(|(p, &o)| {
                let s = if o { Sign::Minus } else { Sign::Plus };
                if self.flip == Some(p) {
                    s.flip()
                } else {
                    s
                }
            })
            .collect()
    }
}

fn box_input(obs: Observable) -> bool {
    obs == Observable::Y
}

pub fn play_prbox<R: Rng + ?Sized>(
    g: &GameSpec,
    s: &PrBoxStrategy,
    rounds: u64,
    dist: &ContextDistribution,
    rng: &mut R,
) -> Result<PlayReport> {
    if !g.is_standard_two_party() {
        return Err(Error::UnsupportedGame("PR box play needs the xx, xy, yx, yy contexts".into()));
    }
    if s.flip.is_some_and(|p| p > 1) {
        return Err(Error::UnsupportedGame("flip must name party 1 or 2".into()));
    }
    play(g, rounds, dist, rng, |k, rng| {
        let obs = g.contexts[k].observables();
        let outputs = pr_box(box_input(obs[0]), box_input(obs[1]), rng);
        Ok(s.answers(outputs))
    })
}

/// Table of classically winnable games, each with one witness strategy
/// (targets in `yyx yxy xyy xxx` order; values for parties 1..3).
pub const CLASSICAL_WITNESSES: [(&str, [i8; 3], [i8; 3]); 8] = [
    ("----", [-1, -1, -1], [-1, -1, -1]),
    ("--++", [-1, -1, 1], [-1, 1, -1]),
    ("-++-", [-1, -1, -1], [-1, -1, 1]),
    ("-+-+", [-1, -1, 1], [-1, 1, 1]),
    ("+-+-", [-1, -1, -1], [-1, 1, -1]),
    ("+--+", [-1, -1, 1], [-1, -1, -1]),
    ("++--", [-1, -1, -1], [-1, 1, 1]),
    ("++++", [1, 1, 1], [1, 1, 1]),
];

pub fn classical_witnesses() -> Vec<(GameSpec, ClassicalStrategy)> {
    let to_signs = |v: [i8; 3]| -> Vec<Sign> {
        v.iter().map(|&x| Sign::try_from(x).expect("static table")).collect()
    };
    CLASSICAL_WITNESSES
        .iter()
        .map(|(t, x, y)| {
            let g = GameSpec::parse_three_party(t).expect("static targets");
            (g, ClassicalStrategy { x: to_signs(*x), y: to_signs(*y) })
        })
        .collect()
}

/// `max |(M psi)_k| / |psi|`; zero when `psi` lies in the nullspace of `M`.
pub fn nullspace_residual(m: &Matrix, psi: &Vector) -> Result<f64> {
    let out = m.apply(psi)?;
    Ok(out.entries().iter().map(|z| z.norm()).fold(0.0, f64::max) / psi.norm().max(linalg::EPS))
}
