//! Orthogonality hypergraphs, their two-valued states, and partition logics.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Context, Sign};

/// Atoms plus contexts (hyperedges); contexts hold indices into `atoms`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph")]
pub struct Hypergraph {
    atoms: Vec<String>,
    contexts: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawHypergraph {
    atoms: Vec<String>,
    contexts: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = Error;

    fn try_from(raw: RawHypergraph) -> Result<Self> {
        Hypergraph::new(raw.atoms, raw.contexts)
    }
}

impl Hypergraph {
    pub fn new(atoms: Vec<String>, contexts: Vec<Vec<usize>>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidHypergraph(msg));
        let mut covered = vec![false; atoms.len()];
        for (c, ctx) in contexts.iter().enumerate() {
            if ctx.is_empty() {
                return invalid(format!("context {c} is empty"));
            }
            let mut seen = BTreeSet::new();
            for &a in ctx {
                if a >= atoms.len() {
                    return invalid(format!("context {c} references atom {a} of {}", atoms.len()));
                }
                if !seen.insert(a) {
                    return invalid(format!("context {c} lists atom {a} twice"));
                }
                covered[a] = true;
            }
        }
        if let Some(a) = covered.iter().position(|&c| !c) {
            return invalid(format!("atom {a} ({:?}) belongs to no context", atoms[a]));
        }
        Ok(Hypergraph { atoms, contexts })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn context_count(&self) -> usize {
        self.contexts.len()
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    /// Number of contexts each atom belongs to.
    pub fn atom_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.atoms.len()];
        for ctx in &self.contexts {
            for &a in ctx {
                deg[a] += 1;
            }
        }
        deg
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("hypergraph serializes")
    }
}

/// A 0/1 valuation on the atoms of a hypergraph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoValuedState {
    values: Vec<bool>,
}

impl TwoValuedState {
    pub fn new(values: Vec<bool>) -> Self {
        TwoValuedState { values }
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> bool {
        self.values[atom]
    }

    /// Atoms assigned the value 1.
    pub fn true_atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().enumerate().filter(|(_, &v)| v).map(|(a, _)| a)
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.values.iter().map(|&v| u8::from(v)).collect()
    }

    /// Exclusivity and completeness: exactly one 1 in every context.
    pub fn check(&self, h: &Hypergraph) -> Result<()> {
        if self.values.len() != h.atom_count() {
            return Err(Error::DimensionMismatch { left: self.values.len(), right: h.atom_count() });
        }
        for (c, ctx) in h.contexts.iter().enumerate() {
            let ones = ctx.iter().filter(|&&a| self.values[a]).count();
            if ones != 1 {
                return Err(Error::InvalidState(format!("context {c} holds {ones} ones")));
            }
        }
        Ok(())
    }
}

/// JSON form `{"states": [[0,1,0,...], ...]}`, aligned with atom order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateList {
    pub states: Vec<Vec<u8>>,
}

impl StateList {
    pub fn from_states(states: &[TwoValuedState]) -> Self {
        StateList { states: states.iter().map(TwoValuedState::to_bits).collect() }
    }

    pub fn into_states(self) -> Result<Vec<TwoValuedState>> {
        self.states
            .into_iter()
            .map(|bits| {
                bits.into_iter()
                    .map(|b| match b {
                        0 => Ok(false),
                        1 => Ok(true),
                        other => Err(Error::InvalidState(format!("value {other} is not 0 or 1"))),
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(TwoValuedState::new)
            })
            .collect()
    }
}

/// Enumerate all two-valued states in lexicographic order of their 0/1
/// vectors, stopping after `limit` states if given.
pub fn enumerate_states(h: &Hypergraph, limit: Option<usize>) -> Vec<TwoValuedState> {
    let mut search = StateSearch::new(h, limit);
    search.run(0);
    search.found
}

/// Atom-order depth-first search, 0 before 1, with per-context counters.
struct StateSearch<'a> {
    h: &'a Hypergraph,
    limit: Option<usize>,
    atom_contexts: Vec<Vec<usize>>,
    ones: Vec<usize>,
    open: Vec<usize>,
    values: Vec<bool>,
    found: Vec<TwoValuedState>,
}

impl<'a> StateSearch<'a> {
    fn new(h: &'a Hypergraph, limit: Option<usize>) -> Self {
        let mut atom_contexts = vec![Vec::new(); h.atom_count()];
        for (c, ctx) in h.contexts.iter().enumerate() {
            for &a in ctx {
                atom_contexts[a].push(c);
            }
        }
        StateSearch {
            h,
            limit,
            atom_contexts,
            ones: vec![0; h.context_count()],
            open: h.contexts.iter().map(Vec::len).collect(),
            values: vec![false; h.atom_count()],
            found: Vec::new(),
        }
    }

    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    fn run(&mut self, atom: usize) {
        if self.done() {
            return;
        }
        if atom == self.h.atom_count() {
            self.found.push(TwoValuedState::new(self.values.clone()));
            return;
        }
        for value in [false, true] {
            if self.admissible(atom, value) {
                self.assign(atom, value);
                self.run(atom + 1);
                self.unassign(atom, value);
            }
        }
    }

    fn admissible(&self, atom: usize, value: bool) -> bool {
        self.atom_contexts[atom].iter().all(|&c| {
            if value {
                self.ones[c] == 0
            } else {
                // a context may not close without its single 1
                self.ones[c] == 1 || self.open[c] > 1
            }
        })
    }

    fn assign(&mut self, atom: usize, value: bool) {
        self.values[atom] = value;
        for &c in &self.atom_contexts[atom] {
            self.open[c] -= 1;
            self.ones[c] += usize::from(value);
        }
    }

    fn unassign(&mut self, atom: usize, value: bool) {
        self.values[atom] = false;
        for &c in &self.atom_contexts[atom] {
            self.open[c] += 1;
            self.ones[c] -= usize::from(value);
        }
    }
}

/// First pair of distinct atoms that no state tells apart.
pub fn inseparable_pair(h: &Hypergraph, states: &[TwoValuedState]) -> Option<(usize, usize)> {
    let n = h.atom_count();
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .find(|&(a, b)| states.iter().all(|s| s.value(a) == s.value(b)))
}

/// True iff every pair of distinct atoms receives different values under
/// some state.
pub fn is_separating(h: &Hypergraph, states: &[TwoValuedState]) -> bool {
    !states.is_empty() && inseparable_pair(h, states).is_none()
}

/// Atoms labelled by the (1-based) indices of the states that make them true;
/// contexts become partitions of `{1..state_count}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionLogic {
    pub state_count: usize,
    pub contexts: Vec<Vec<BTreeSet<usize>>>,
    pub atom_labels: Vec<BTreeSet<usize>>,
}

pub fn partition_logic(h: &Hypergraph, states: &[TwoValuedState]) -> Result<PartitionLogic> {
    for s in states {
        s.check(h)?;
    }
    if let Some((a, b)) = inseparable_pair(h, states) {
        return Err(Error::NotSeparating(a, b));
    }
    let mut atom_labels = vec![BTreeSet::new(); h.atom_count()];
    for (k, s) in states.iter().enumerate() {
        for a in s.true_atoms() {
            atom_labels[a].insert(k + 1);
        }
    }
    let contexts = h
        .contexts
        .iter()
        .map(|ctx| ctx.iter().map(|&a| atom_labels[a].clone()).collect())
        .collect();
    let pl = PartitionLogic { state_count: states.len(), contexts, atom_labels };
    debug_assert!(pl.is_well_formed());
    Ok(pl)
}

impl PartitionLogic {
    /// Every context's blocks are pairwise disjoint and cover `{1..n}`.
    pub fn is_well_formed(&self) -> bool {
        let all: BTreeSet<usize> = (1..=self.state_count).collect();
        self.contexts.iter().all(|blocks| {
            let total: usize = blocks.iter().map(BTreeSet::len).sum();
            let union: BTreeSet<usize> = blocks.iter().flatten().copied().collect();
            total == self.state_count && union == all
        })
    }

    /// Find a bijection `pi` (as `pi[b - 1]`, 1-based values) from the balls of
    /// `reference` to the balls of `self` such that the `i`-th reference
    /// partition, relabelled by `pi`, equals the `i`-th context of `self` as a
    /// set of blocks.
    pub fn relabeling_from(&self, reference: &[Vec<BTreeSet<usize>>]) -> Option<Vec<usize>> {
        if reference.len() > self.contexts.len() {
            return None;
        }
        let n = self.state_count;
        let targets: Vec<BTreeSet<BTreeSet<usize>>> = self.contexts[..reference.len()]
            .iter()
            .map(|blocks| blocks.iter().cloned().collect())
            .collect();
        let mut pi = vec![0usize; n];
        let mut used = vec![false; n + 1];
        relabel_search(reference, &targets, 1, n, &mut pi, &mut used).then_some(pi)
    }
}

fn relabel_search(
    reference: &[Vec<BTreeSet<usize>>],
    targets: &[BTreeSet<BTreeSet<usize>>],
    ball: usize,
    n: usize,
    pi: &mut [usize],
    used: &mut [bool],
) -> bool {
    if ball > n {
        return true;
    }
    for image in 1..=n {
        if used[image] {
            continue;
        }
        pi[ball - 1] = image;
        used[image] = true;
        if partial_consistent(reference, targets, ball, pi)
            && relabel_search(reference, targets, ball + 1, n, pi, used)
        {
            return true;
        }
        used[image] = false;
    }
    pi[ball - 1] = 0;
    false
}

/// Blocks whose balls are all assigned (`<= assigned`) must map onto blocks.
fn partial_consistent(
    reference: &[Vec<BTreeSet<usize>>],
    targets: &[BTreeSet<BTreeSet<usize>>],
    assigned: usize,
    pi: &[usize],
) -> bool {
    reference.iter().zip(targets).all(|(blocks, target)| {
        blocks.iter().filter(|b| b.iter().all(|&x| x <= assigned)).all(|b| {
            let mapped: BTreeSet<usize> = b.iter().map(|&x| pi[x - 1]).collect();
            target.contains(&mapped)
        })
    })
}

/// The four disjoint three-party GHZ contexts with eight atoms each, in the
/// order `xxx, xyy, yxy, yyx`; atoms are named by outcome, e.g. `x+y-y+`.
pub fn ghz_isolated_logic() -> Hypergraph {
    let mut atoms = Vec::with_capacity(32);
    let mut contexts = Vec::with_capacity(4);
    for label in ["xxx", "xyy", "yxy", "yyx"] {
        let ctx: Context = label.parse().expect("static label");
        let mut members = Vec::with_capacity(8);
        for outcome in lexicographic_outcomes(3) {
            members.push(atoms.len());
            atoms.push(ctx.outcome_label(&outcome));
        }
        contexts.push(members);
    }
    Hypergraph::new(atoms, contexts).expect("isolated GHZ logic is valid")
}

/// All sign tuples of length `n`, `+` before `-` in each slot.
pub fn lexicographic_outcomes(n: usize) -> Vec<Vec<Sign>> {
    (0..1usize << n)
        .map(|k| {
            (0..n)
                .map(|slot| if k >> (n - 1 - slot) & 1 == 0 { Sign::Plus } else { Sign::Minus })
                .collect()
        })
        .collect()
}

/// The eight partitions of `{1..8}` listed for the GHZ partition logic. The
/// first four are the horizontal GHZ contexts; the last four are transversals.
pub const LISTED_PARTITIONS: [[[usize; 2]; 4]; 8] = [
    [[1, 2], [3, 4], [5, 6], [7, 8]],
    [[5, 7], [6, 8], [1, 3], [2, 4]],
    [[3, 8], [2, 5], [4, 7], [1, 6]],
    [[4, 6], [1, 7], [2, 8], [3, 5]],
    [[1, 2], [6, 8], [4, 7], [3, 5]],
    [[7, 8], [1, 3], [2, 5], [4, 6]],
    [[5, 6], [2, 4], [3, 8], [1, 7]],
    [[3, 4], [5, 7], [1, 6], [2, 8]],
];

pub fn listed_partitions() -> Vec<Vec<BTreeSet<usize>>> {
    LISTED_PARTITIONS
        .iter()
        .map(|p| p.iter().map(|b| b.iter().copied().collect()).collect())
        .collect()
}

/// The four vertical contexts: block `j` of each horizontal partition.
pub fn vertical_partitions() -> Vec<Vec<BTreeSet<usize>>> {
    let listed = listed_partitions();
    (0..4).map(|j| (0..4).map(|row| listed[row][j].clone()).collect()).collect()
}

fn hypergraph_from_partitions(partitions: &[Vec<BTreeSet<usize>>]) -> Hypergraph {
    let mut blocks: Vec<BTreeSet<usize>> = Vec::new();
    let mut contexts = Vec::with_capacity(partitions.len());
    for partition in partitions {
        let members = partition
            .iter()
            .map(|b| match blocks.iter().position(|x| x == b) {
                Some(k) => k,
                None => {
                    blocks.push(b.clone());
                    blocks.len() - 1
                }
            })
            .collect();
        contexts.push(members);
    }
    let atoms = blocks.iter().map(block_name).collect();
    Hypergraph::new(atoms, contexts).expect("partition hypergraph is valid")
}

pub fn block_name(block: &BTreeSet<usize>) -> String {
    let inner: Vec<String> = block.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// The eight listed partitions taken verbatim as contexts (16 atoms, each in
/// two contexts). Admits 24 two-valued states.
pub fn listed_partition_logic() -> Hypergraph {
    hypergraph_from_partitions(&listed_partitions())
}

/// The tightened GHZ logic: 4 horizontal, 4 diagonal and 4 vertical contexts
/// over 16 atoms, each atom in three contexts. The first eight contexts are
/// the listed partitions in order.
pub fn tightened_ghz_logic() -> Hypergraph {
    let mut partitions = listed_partitions();
    partitions.extend(vertical_partitions());
    hypergraph_from_partitions(&partitions)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ExportFormat::Json),
            "dot" => Ok(ExportFormat::Dot),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

const PALETTE: [&str; 12] = [
    "red", "blue", "darkgreen", "orange", "purple", "brown", "deeppink", "cyan4", "gold3",
    "gray40", "navy", "olivedrab",
];

pub fn export(h: &Hypergraph, format: ExportFormat) -> String {
    match format {
        ExportFormat::Json => h.to_json(),
        ExportFormat::Dot => to_dot(h),
    }
}

fn to_dot(h: &Hypergraph) -> String {
    let mut out = String::from("graph hypergraph {\n  node [shape=circle];\n");
    for (a, name) in h.atoms.iter().enumerate() {
        let _ = writeln!(out, "  a{a} [label=\"{}\"];", name.replace('"', "\\\""));
    }
    for (c, ctx) in h.contexts.iter().enumerate() {
        let color = PALETTE[c % PALETTE.len()];
        let _ = writeln!(out, "  subgraph context_{c} {{");
        let _ = writeln!(out, "    edge [color={color}, penwidth=2];");
        let path: Vec<String> = ctx.iter().map(|a| format!("a{a}")).collect();
        if path.len() == 1 {
            let _ = writeln!(out, "    {};", path[0]);
        } else {
            let _ = writeln!(out, "    {};", path.join(" -- "));
        }
        let _ = writeln!(out, "  }}");
    }
    out.push_str("}\n");
    out
}
