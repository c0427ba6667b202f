//! Finite Kripke structures: states, labels over interned atoms and
//! successor lists, together with the line-oriented text format and a few
//! instance generators.
//!
//! Text format (UTF-8, one directive per line):
//!
//! ```text
//! states <n>
//! label <id> <atom> [<atom> ...]
//! trans <src> <dst>
//! ```
//!
//! `#` starts a comment and blank lines are ignored. States without a
//! `label` line carry the empty label. Duplicate transitions are dropped.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Dense state index, `0 <= index < num_states`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Interned atom handle, local to one structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub u32);

/// A state label: a set of atoms. Equality is set equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(BTreeSet<AtomId>);

impl Label {
    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, atom: AtomId) {
        self.0.insert(atom);
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: missing `states <n>` header")]
    MissingHeader { line: usize },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: state id {id} out of range (structure has {num_states} states)")]
    OutOfRange {
        line: usize,
        id: u64,
        num_states: usize,
    },
}

/// An immutable Kripke structure `(states, transitions, labelling)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeStructure {
    atoms: Vec<String>,
    labels: Vec<Label>,
    succ: Vec<Vec<StateId>>,
    num_transitions: usize,
}

impl KripkeStructure {
    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    /// `|→|`, the number of distinct transitions.
    pub fn num_transitions(&self) -> usize {
        self.num_transitions
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = StateId> {
        (0..self.num_states() as u32).map(StateId)
    }

    pub fn label(&self, s: StateId) -> &Label {
        &self.labels[s.index()]
    }

    pub fn succ(&self, s: StateId) -> &[StateId] {
        &self.succ[s.index()]
    }

    pub fn atom_name(&self, atom: AtomId) -> &str {
        &self.atoms[atom.0 as usize]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.states()
            .flat_map(move |s| self.succ(s).iter().map(move |&t| (s, t)))
    }

    /// The coarsest partition in which two states share a block iff their
    /// labels are equal. Blocks are sorted and ordered by smallest member.
    pub fn initial_label_partition(&self) -> Vec<Vec<StateId>> {
        let mut index: HashMap<&Label, usize> = HashMap::new();
        let mut blocks: Vec<Vec<StateId>> = Vec::new();
        for s in self.states() {
            let next = blocks.len();
            let b = *index.entry(self.label(s)).or_insert(next);
            if b == next {
                blocks.push(Vec::new());
            }
            blocks[b].push(s);
        }
        blocks
    }

    /// `pre(target) = { s | exists t in target. s -> t }`, sorted.
    pub fn pre_of(&self, target: &[StateId]) -> Vec<StateId> {
        let mut in_target = vec![false; self.num_states()];
        for &t in target {
            in_target[t.index()] = true;
        }
        self.states()
            .filter(|&s| self.succ(s).iter().any(|t| in_target[t.index()]))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_ks(text)
    }

    pub fn to_text(&self) -> String {
        serialize_ks(self)
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(self.to_text().as_bytes())
    }
}

/// Incremental construction of a [`KripkeStructure`].
#[derive(Clone, Debug)]
pub struct KripkeBuilder {
    atoms: Vec<String>,
    atom_ids: HashMap<String, AtomId>,
    labels: Vec<Label>,
    succ: Vec<Vec<StateId>>,
    seen: HashSet<(u32, u32)>,
}

impl KripkeBuilder {
    pub fn new(num_states: usize) -> Self {
        KripkeBuilder {
            atoms: Vec::new(),
            atom_ids: HashMap::new(),
            labels: vec![Label::default(); num_states],
            succ: vec![Vec::new(); num_states],
            seen: HashSet::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    fn intern(&mut self, atom: &str) -> AtomId {
        if let Some(&id) = self.atom_ids.get(atom) {
            return id;
        }
        let id = AtomId(self.atoms.len() as u32);
        self.atoms.push(atom.to_owned());
        self.atom_ids.insert(atom.to_owned(), id);
        id
    }

    /// Adds `atom` to the label of `state`.
    ///
    /// Panics if `state` is out of range.
    pub fn add_atom(&mut self, state: u32, atom: &str) -> &mut Self {
        assert!(
            (state as usize) < self.num_states(),
            "state {state} out of range"
        );
        let id = self.intern(atom);
        self.labels[state as usize].insert(id);
        self
    }

    /// Adds `src -> dst`; duplicates are ignored.
    ///
    /// Panics if either id is out of range.
    pub fn add_transition(&mut self, src: u32, dst: u32) -> &mut Self {
        let n = self.num_states();
        assert!(
            (src as usize) < n && (dst as usize) < n,
            "transition {src}->{dst} out of range"
        );
        if self.seen.insert((src, dst)) {
            self.succ[src as usize].push(StateId(dst));
        }
        self
    }

    pub fn build(self) -> KripkeStructure {
        let num_transitions = self.succ.iter().map(Vec::len).sum();
        KripkeStructure {
            atoms: self.atoms,
            labels: self.labels,
            succ: self.succ,
            num_transitions,
        }
    }
}

fn parse_id(tok: &str, line: usize, num_states: usize) -> Result<u32, ParseError> {
    let id: u64 = tok.parse().map_err(|_| ParseError::Syntax {
        line,
        msg: format!("expected a state id, found `{tok}`"),
    })?;
    if id >= num_states as u64 {
        return Err(ParseError::OutOfRange {
            line,
            id,
            num_states,
        });
    }
    Ok(id as u32)
}

/// Parses the KS text format. State ids follow the declaration range
/// `0..n`; duplicate transitions are dropped.
pub fn parse_ks(text: &str) -> Result<KripkeStructure, ParseError> {
    let mut builder: Option<KripkeBuilder> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        let Some(keyword) = toks.next() else { continue };

        let Some(b) = builder.as_mut() else {
            if keyword != "states" {
                return Err(ParseError::MissingHeader { line });
            }
            let n = toks.next().ok_or_else(|| ParseError::Syntax {
                line,
                msg: "`states` needs a count".into(),
            })?;
            let n: usize = n.parse().map_err(|_| ParseError::Syntax {
                line,
                msg: format!("invalid state count `{n}`"),
            })?;
            if toks.next().is_some() {
                return Err(ParseError::Syntax {
                    line,
                    msg: "trailing tokens after state count".into(),
                });
            }
            builder = Some(KripkeBuilder::new(n));
            continue;
        };

        let n = b.num_states();
        match keyword {
            "label" => {
                let id = toks.next().ok_or_else(|| ParseError::Syntax {
                    line,
                    msg: "`label` needs a state id".into(),
                })?;
                let id = parse_id(id, line, n)?;
                for atom in toks {
                    b.add_atom(id, atom);
                }
            }
            "trans" => {
                let (Some(src), Some(dst)) = (toks.next(), toks.next()) else {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "`trans` needs two state ids".into(),
                    });
                };
                let src = parse_id(src, line, n)?;
                let dst = parse_id(dst, line, n)?;
                if toks.next().is_some() {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "trailing tokens after transition".into(),
                    });
                }
                b.add_transition(src, dst);
            }
            "states" => {
                return Err(ParseError::Syntax {
                    line,
                    msg: "duplicate `states` header".into(),
                });
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("unknown directive `{other}`"),
                });
            }
        }
    }
    builder
        .map(KripkeBuilder::build)
        .ok_or(ParseError::MissingHeader {
            line: last_line.max(1),
        })
}

/// Canonical text form: header, then label lines in state order (atoms in
/// interning order), then transitions in source/successor order.
pub fn serialize_ks(ks: &KripkeStructure) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "states {}", ks.num_states());
    for s in ks.states() {
        let label = ks.label(s);
        if label.is_empty() {
            continue;
        }
        let _ = write!(out, "label {s}");
        for a in label.atoms() {
            let _ = write!(out, " {}", ks.atom_name(a));
        }
        out.push('\n');
    }
    for (s, t) in ks.transitions() {
        let _ = writeln!(out, "trans {s} {t}");
    }
    out
}

/// Random structure: every ordered pair `(s, t)` is a transition with
/// probability `edge_prob`, labels are drawn uniformly from the singleton
/// atoms `p0 .. p{n_labels-1}`.
///
/// The generator is ChaCha8 seeded with `seed` via `SeedableRng::seed_from_u64`
/// (rand_chacha 0.3); labels are drawn first, in state order, then edges
/// row by row. Outputs are stable across platforms.
pub fn generate_random_ks(
    n_states: usize,
    n_labels: usize,
    edge_prob: f64,
    seed: u64,
) -> KripkeStructure {
    assert!(
        n_states >= 1 && n_labels >= 1,
        "need at least one state and one label"
    );
    assert!(
        (0.0..=1.0).contains(&edge_prob),
        "edge probability must lie in [0, 1]"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = KripkeBuilder::new(n_states);
    for s in 0..n_states as u32 {
        let l = rng.gen_range(0..n_labels);
        b.add_atom(s, &format!("p{l}"));
    }
    for s in 0..n_states as u32 {
        for t in 0..n_states as u32 {
            if rng.gen_bool(edge_prob) {
                b.add_transition(s, t);
            }
        }
    }
    b.build()
}

fn uniform(n: usize) -> KripkeBuilder {
    let mut b = KripkeBuilder::new(n);
    for s in 0..n as u32 {
        b.add_atom(s, "p");
    }
    b
}

/// `0 -> 1 -> ... -> n-1`, all states labelled `p`.
pub fn generate_chain(n: usize) -> KripkeStructure {
    let mut b = uniform(n);
    for s in 1..n as u32 {
        b.add_transition(s - 1, s);
    }
    b.build()
}

/// Complete `branching`-ary tree of the given depth with edges from parent
/// to child, breadth-first numbering, all states labelled `p`.
pub fn generate_tree(depth: usize, branching: usize) -> KripkeStructure {
    let mut n = 1usize;
    let mut level = 1usize;
    for _ in 0..depth {
        level *= branching;
        n += level;
    }
    let mut b = uniform(n);
    for child in 1..n {
        if let Some(parent) = (child - 1).checked_div(branching) {
            b.add_transition(parent as u32, child as u32);
        }
    }
    b.build()
}

/// Every `i -> j` with `i != j`, all states labelled `p`.
pub fn generate_clique(n: usize) -> KripkeStructure {
    let mut b = uniform(n);
    for s in 0..n as u32 {
        for t in 0..n as u32 {
            if s != t {
                b.add_transition(s, t);
            }
        }
    }
    b.build()
}
