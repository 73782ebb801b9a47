//! Elementary collapses, certificates and a budgeted search for collapse
//! sequences.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::chain::is_acyclic;
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::simplex::{Simplex, VertexId};

/// Default number of search states expanded before giving up.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// One elementary collapse: `removed` lists every simplex containing
/// `free_face`, in (dimension, lex) order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseStep {
    pub free_face: Simplex,
    pub removed: Vec<Simplex>,
}

impl CollapseStep {
    /// A step removing exactly a free face and its unique coface.
    pub fn primitive(free_face: Simplex, coface: Simplex) -> Self {
        Self {
            removed: vec![free_face.clone(), coface],
            free_face,
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.removed.len() == 2
    }
}

/// A certificate that a complex collapses onto `terminal`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseSequence {
    pub steps: Vec<CollapseStep>,
    pub terminal: Complex,
}

impl CollapseSequence {
    /// True when the terminal complex is a single vertex.
    pub fn reaches_point(&self) -> bool {
        self.terminal.len() == 1
    }
}

/// Result of a collapsibility search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollapseOutcome {
    Collapsible(CollapseSequence),
    NotCollapsible,
    BudgetExceeded { explored: u64 },
}

/// Result of searching for a collapse onto a prescribed subcomplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollapseOntoOutcome {
    Certificate(CollapseSequence),
    /// No certificate found. `exhausted` is true when every reachable state was
    /// visited, which rules out any collapse onto the target.
    Unknown {
        explored: u64,
        exhausted: bool,
    },
}

/// Pairs `(free face, unique maximal coface)` of `c`, free faces in
/// (dimension, lex) order.
pub fn free_faces(c: &Complex) -> Vec<(Simplex, Simplex)> {
    let mut owner: HashMap<Simplex, Option<usize>> = HashMap::new();
    let facets = c.facets();
    for (k, f) in facets.iter().enumerate() {
        for face in f.faces() {
            if &face == f {
                continue;
            }
            owner.entry(face).and_modify(|o| *o = None).or_insert(Some(k));
        }
    }
    let mut out: Vec<(Simplex, Simplex)> = owner
        .into_iter()
        .filter_map(|(s, o)| o.map(|k| (s, facets[k].clone())))
        .collect();
    out.sort();
    out
}

fn unique_maximal_coface(c: &Complex, beta: &Simplex) -> Result<Simplex> {
    if !c.contains(beta) {
        return Err(Error::NotInComplex(beta.clone()));
    }
    let mut found = None;
    for f in c.facets() {
        if beta.is_face_of(f) {
            if f == beta || found.is_some() {
                return Err(Error::NotAFreeFace(beta.clone()));
            }
            found = Some(f.clone());
        }
    }
    found.ok_or_else(|| Error::NotAFreeFace(beta.clone()))
}

/// Removes every simplex containing the free face `beta`.
pub fn elementary_collapse(c: &Complex, beta: &Simplex) -> Result<(Complex, CollapseStep)> {
    unique_maximal_coface(c, beta)?;
    let removed = c.star_of(beta);
    let next = c.without(&removed)?;
    Ok((
        next,
        CollapseStep {
            free_face: beta.clone(),
            removed,
        },
    ))
}

/// Rewrites the elementary collapse at `beta` as primitive collapses.
///
/// With `alpha` the unique maximal coface and `v` the largest vertex of
/// `alpha` outside `beta`, each `gamma` between `beta` and `alpha` avoiding `v`
/// is paired with `gamma + v`; pairs are emitted by decreasing dimension, then
/// lex order.
pub fn expand_to_primitive(c: &Complex, beta: &Simplex) -> Result<Vec<CollapseStep>> {
    let alpha = unique_maximal_coface(c, beta)?;
    let extra = alpha.difference(beta);
    let v = *extra.last().expect("free face is a proper face");
    let others: Vec<VertexId> = extra[..extra.len() - 1].to_vec();
    let mut lower: Vec<Simplex> = (0u32..1 << others.len())
        .map(|mask| {
            let mut g = beta.clone();
            for (i, &w) in others.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    g = g.with_vertex(w).expect("vertex outside beta");
                }
            }
            g
        })
        .collect();
    lower.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.cmp(b)));
    Ok(lower
        .into_iter()
        .map(|g| {
            let up = g.with_vertex(v).expect("v lies outside gamma");
            CollapseStep::primitive(g, up)
        })
        .collect())
}

/// Replays `steps` on `c`, checking each one, and returns the final complex.
pub fn replay(c: &Complex, steps: &[CollapseStep]) -> Result<Complex> {
    let mut current: BTreeSet<Simplex> = c.simplices().cloned().collect();
    for step in steps {
        let beta = &step.free_face;
        if !current.contains(beta) {
            return Err(Error::NotInComplex(beta.clone()));
        }
        let star: Vec<Simplex> = current.iter().filter(|s| beta.is_face_of(s)).cloned().collect();
        // the star of a free face has a unique top element strictly above it
        let top = star.last().expect("star contains beta");
        if top == beta || !star.iter().all(|s| s.is_face_of(top)) {
            return Err(Error::NotAFreeFace(beta.clone()));
        }
        let mut claimed = step.removed.clone();
        claimed.sort();
        if claimed != star {
            return Err(Error::Precondition(format!(
                "step at {beta} removes {:?} but the star is {:?}",
                step.removed, star
            )));
        }
        for s in &star {
            current.remove(s);
        }
    }
    Ok(Complex::from_sorted_iter(current.into_iter()))
}

/// True when every step is a legal elementary collapse and the result equals
/// the recorded terminal complex.
pub fn verify_sequence(c: &Complex, seq: &CollapseSequence) -> bool {
    matches!(replay(c, &seq.steps), Ok(end) if end == seq.terminal)
}

/// Index-based view of a complex for the search.
struct SearchSpace<'a> {
    complex: &'a Complex,
    /// codimension-one cofaces of each simplex
    up: Vec<Vec<usize>>,
    /// simplex indices, higher dimensions first, lex within a dimension
    order: Vec<usize>,
}

type State = Vec<u64>;

fn has(state: &State, i: usize) -> bool {
    state[i / 64] >> (i % 64) & 1 == 1
}

fn clear(state: &mut State, i: usize) {
    state[i / 64] &= !(1u64 << (i % 64));
}

impl<'a> SearchSpace<'a> {
    fn new(complex: &'a Complex) -> Self {
        let mut up = vec![Vec::new(); complex.len()];
        for (i, s) in complex.simplices().enumerate() {
            for (_, f) in s.facets() {
                up[complex.index_of(&f).expect("closed")].push(i);
            }
        }
        let top = complex.dim().unwrap_or(0);
        let order = (0..=top)
            .rev()
            .flat_map(|d| {
                let start = complex.of_dim(d).first().and_then(|s| complex.index_of(s)).unwrap_or(0);
                start..start + complex.count_of_dim(d)
            })
            .collect();
        Self { complex, up, order }
    }

    fn full_state(&self) -> State {
        let n = self.complex.len();
        let mut s = vec![0u64; n.div_ceil(64)];
        for i in 0..n {
            s[i / 64] |= 1 << (i % 64);
        }
        s
    }

    /// Primitive free pairs available in `state`, honouring `protected`.
    fn moves(&self, state: &State, protected: Option<&State>) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &b in &self.order {
            if !has(state, b) || protected.is_some_and(|p| has(p, b)) {
                continue;
            }
            let mut present = self.up[b].iter().filter(|&&a| has(state, a));
            let (Some(&a), None) = (present.next(), present.next()) else {
                continue;
            };
            if self.up[a].iter().any(|&g| has(state, g)) {
                continue;
            }
            out.push((b, a));
        }
        out
    }

    fn step(&self, b: usize, a: usize) -> CollapseStep {
        CollapseStep::primitive(self.complex.simplex(b).clone(), self.complex.simplex(a).clone())
    }

    fn terminal(&self, state: &State) -> Complex {
        Complex::from_sorted_iter(
            (0..self.complex.len())
                .filter(|&i| has(state, i))
                .map(|i| self.complex.simplex(i).clone()),
        )
    }
}

struct Dfs<'s, 'a> {
    space: &'s SearchSpace<'a>,
    goal: Box<dyn Fn(&State) -> bool + 's>,
    protected: Option<State>,
    dead: HashSet<State>,
    explored: u64,
    budget: u64,
    path: Vec<(usize, usize)>,
}

enum Search {
    Found(State),
    Dead,
    OutOfBudget,
}

impl Dfs<'_, '_> {
    fn run(&mut self, state: State) -> Search {
        if (self.goal)(&state) {
            return Search::Found(state);
        }
        if self.dead.contains(&state) {
            return Search::Dead;
        }
        if self.explored >= self.budget {
            return Search::OutOfBudget;
        }
        self.explored += 1;
        for (b, a) in self.space.moves(&state, self.protected.as_ref()) {
            let mut next = state.clone();
            clear(&mut next, b);
            clear(&mut next, a);
            self.path.push((b, a));
            match self.run(next) {
                Search::Dead => {
                    self.path.pop();
                }
                other => return other,
            }
        }
        self.dead.insert(state);
        Search::Dead
    }
}

fn count(state: &State) -> u32 {
    state.iter().map(|w| w.count_ones()).sum()
}

/// Searches for a sequence of primitive collapses reducing `c` to a vertex.
///
/// Moves are tried with free faces in decreasing dimension, then lex order;
/// states already shown to be dead ends are skipped. Complexes with Euler
/// characteristic other than one or nonvanishing mod-2 homology are rejected
/// without search.
pub fn search_collapsible(c: &Complex, node_budget: u64) -> CollapseOutcome {
    if c.is_empty() || c.euler_characteristic() != 1 {
        return CollapseOutcome::NotCollapsible;
    }
    if !is_acyclic(c, Prime::new(2).expect("2 is prime")) {
        return CollapseOutcome::NotCollapsible;
    }
    let space = SearchSpace::new(c);
    let mut dfs = Dfs {
        space: &space,
        goal: Box::new(|s| count(s) == 1),
        protected: None,
        dead: HashSet::new(),
        explored: 0,
        budget: node_budget,
        path: Vec::new(),
    };
    match dfs.run(space.full_state()) {
        Search::Found(end) => CollapseOutcome::Collapsible(CollapseSequence {
            steps: dfs.path.iter().map(|&(b, a)| space.step(b, a)).collect(),
            terminal: space.terminal(&end),
        }),
        Search::Dead => CollapseOutcome::NotCollapsible,
        Search::OutOfBudget => CollapseOutcome::BudgetExceeded { explored: dfs.explored },
    }
}

/// Searches for primitive collapses taking `c` onto its subcomplex `target`,
/// never removing a simplex of `target`.
pub fn collapse_onto(c: &Complex, target: &Complex, node_budget: u64) -> Result<CollapseOntoOutcome> {
    if !target.is_subcomplex_of(c) {
        return Err(Error::NotASubcomplex("collapse target must lie in the complex".into()));
    }
    if c.euler_characteristic() != target.euler_characteristic() {
        return Ok(CollapseOntoOutcome::Unknown {
            explored: 0,
            exhausted: true,
        });
    }
    let space = SearchSpace::new(c);
    let mut protected = vec![0u64; c.len().div_ceil(64)];
    for s in target.simplices() {
        let i = c.index_of(s).expect("subcomplex");
        protected[i / 64] |= 1 << (i % 64);
    }
    let goal_state = protected.clone();
    let mut dfs = Dfs {
        space: &space,
        goal: Box::new(move |s| *s == goal_state),
        protected: Some(protected),
        dead: HashSet::new(),
        explored: 0,
        budget: node_budget,
        path: Vec::new(),
    };
    Ok(match dfs.run(space.full_state()) {
        Search::Found(end) => CollapseOntoOutcome::Certificate(CollapseSequence {
            steps: dfs.path.iter().map(|&(b, a)| space.step(b, a)).collect(),
            terminal: space.terminal(&end),
        }),
        Search::Dead => CollapseOntoOutcome::Unknown {
            explored: dfs.explored,
            exhausted: true,
        },
        Search::OutOfBudget => CollapseOntoOutcome::Unknown {
            explored: dfs.explored,
            exhausted: false,
        },
    })
}
