use super::worldset::{WorldSet, MAX_WORLDS};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// The three binary relations of a modal FM frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Leq1,
    Leq2,
    R,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Leq1 => "leq1",
            Relation::Leq2 => "leq2",
            Relation::R => "R",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("frame has no worlds")]
    Empty,
    #[error("frame has {0} worlds; at most {MAX_WORLDS} are supported")]
    TooManyWorlds(usize),
    #[error("duplicate world name `{0}`")]
    DuplicateWorld(String),
    #[error("unknown world `{world}` in {relation}")]
    UnknownWorld { relation: &'static str, world: String },
    #[error("{relation} is not reflexive at `{world}`")]
    NotReflexive { relation: &'static str, world: String },
    #[error("{relation} is not transitive: {a} <= {b} <= {c} but not {a} <= {c}")]
    NotTransitive { relation: &'static str, a: String, b: String, c: String },
    #[error("{relation} is not antisymmetric: `{a}` and `{b}` are distinct but mutually related")]
    NotAntisymmetric { relation: &'static str, a: String, b: String },
    #[error("leq2 is not contained in leq1: {a} <=2 {b} but not {a} <=1 {b}")]
    Leq2NotInLeq1 { a: String, b: String },
    #[error("R is not admissible: the box of the refined regular open set {witness:?} is {image:?}, which is not refined regular open")]
    NotAdmissible { witness: Vec<String>, image: Vec<String> },
    #[error("frame file: {0}")]
    Json(String),
}

/// A finite modal FM frame `(X, ≤₁, ≤₂, R)` with `≤₂ ⊆ ≤₁`.
///
/// Relations are stored as successor and predecessor rows over world indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FmFrame {
    names: Vec<String>,
    up1: Vec<WorldSet>,
    down1: Vec<WorldSet>,
    up2: Vec<WorldSet>,
    down2: Vec<WorldSet>,
    succ: Vec<WorldSet>,
    pred: Vec<WorldSet>,
}

/// The on-disk frame description. `leq1` and `leq2` list generator pairs and
/// are closed reflexively and transitively on load.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameFile {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub leq1: Vec<(String, String)>,
    #[serde(default)]
    pub leq2: Vec<(String, String)>,
    #[serde(default, rename = "R")]
    pub r: Vec<(String, String)>,
}

fn transpose(rows: &[WorldSet]) -> Vec<WorldSet> {
    let n = rows.len();
    (0..n)
        .map(|v| WorldSet::from_worlds((0..n).filter(|&w| rows[w].contains(v))))
        .collect()
}

fn reflexive_transitive_closure(rows: &mut [WorldSet]) {
    let n = rows.len();
    for (w, row) in rows.iter_mut().enumerate() {
        *row = row.with(w);
    }
    for k in 0..n {
        for w in 0..n {
            if rows[w].contains(k) {
                rows[w] = rows[w].union(rows[k]);
            }
        }
    }
}

impl FmFrame {
    /// Builds a frame from successor rows, validating the order axioms but not
    /// admissibility of `R`.
    pub fn candidate(
        names: Vec<String>,
        leq1: Vec<WorldSet>,
        leq2: Vec<WorldSet>,
        r: Vec<WorldSet>,
    ) -> Result<FmFrame, FrameError> {
        let n = names.len();
        if n == 0 {
            return Err(FrameError::Empty);
        }
        if n > MAX_WORLDS {
            return Err(FrameError::TooManyWorlds(n));
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if !seen.insert(name) {
                return Err(FrameError::DuplicateWorld(name.clone()));
            }
        }
        assert!(leq1.len() == n && leq2.len() == n && r.len() == n, "relation rows must match world count");
        for (rel, rows) in [(Relation::Leq1, &leq1), (Relation::Leq2, &leq2)] {
            check_partial_order(&names, rel.name(), rows)?;
        }
        for a in 0..n {
            for b in leq2[a].iter() {
                if !leq1[a].contains(b) {
                    return Err(FrameError::Leq2NotInLeq1 { a: names[a].clone(), b: names[b].clone() });
                }
            }
        }
        Ok(Self::from_rows_unchecked(names, leq1, leq2, r))
    }

    pub(crate) fn from_rows_unchecked(
        names: Vec<String>,
        leq1: Vec<WorldSet>,
        leq2: Vec<WorldSet>,
        r: Vec<WorldSet>,
    ) -> FmFrame {
        FmFrame {
            down1: transpose(&leq1),
            down2: transpose(&leq2),
            pred: transpose(&r),
            names,
            up1: leq1,
            up2: leq2,
            succ: r,
        }
    }

    /// Like [`FmFrame::candidate`] but also requires `R` to be admissible.
    pub fn new(
        names: Vec<String>,
        leq1: Vec<WorldSet>,
        leq2: Vec<WorldSet>,
        r: Vec<WorldSet>,
    ) -> Result<FmFrame, FrameError> {
        let frame = Self::candidate(names, leq1, leq2, r)?;
        frame.admissibility_witness()?;
        Ok(frame)
    }

    /// Builds a frame from generator pairs: `leq1` and `leq2` are closed
    /// reflexively and transitively, then every axiom is validated.
    pub fn from_generators<S: AsRef<str>>(
        worlds: &[S],
        leq1: &[(S, S)],
        leq2: &[(S, S)],
        r: &[(S, S)],
    ) -> Result<FmFrame, FrameError> {
        let names: Vec<String> = worlds.iter().map(|s| s.as_ref().to_string()).collect();
        if names.len() > MAX_WORLDS {
            return Err(FrameError::TooManyWorlds(names.len()));
        }
        let index: HashMap<&str, usize> =
            names.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
        if index.len() != names.len() {
            let dup = names.iter().enumerate().find(|(k, s)| index[s.as_str()] != *k).unwrap().1;
            return Err(FrameError::DuplicateWorld(dup.clone()));
        }
        let rows = |rel: Relation, pairs: &[(S, S)]| -> Result<Vec<WorldSet>, FrameError> {
            let mut rows = vec![WorldSet::EMPTY; names.len()];
            for (a, b) in pairs {
                let look = |s: &str| {
                    index.get(s).copied().ok_or_else(|| FrameError::UnknownWorld {
                        relation: rel.name(),
                        world: s.to_string(),
                    })
                };
                let (a, b) = (look(a.as_ref())?, look(b.as_ref())?);
                rows[a] = rows[a].with(b);
            }
            Ok(rows)
        };
        let mut l1 = rows(Relation::Leq1, leq1)?;
        let mut l2 = rows(Relation::Leq2, leq2)?;
        let rr = rows(Relation::R, r)?;
        reflexive_transitive_closure(&mut l1);
        reflexive_transitive_closure(&mut l2);
        Self::new(names, l1, l2, rr)
    }

    pub fn from_file(file: &FrameFile) -> Result<FmFrame, FrameError> {
        Self::from_generators(&file.worlds, &file.leq1, &file.leq2, &file.r)
    }

    pub fn from_json(text: &str) -> Result<FmFrame, FrameError> {
        let file: FrameFile = serde_json::from_str(text).map_err(|e| FrameError::Json(e.to_string()))?;
        Self::from_file(&file)
    }

    /// Describes the frame by its covering generators.
    pub fn to_file(&self) -> FrameFile {
        let n = self.len();
        let pairs = |rows: &[WorldSet], reduce: bool| {
            let mut out = Vec::new();
            for a in 0..n {
                for b in rows[a].iter() {
                    if reduce && a == b {
                        continue;
                    }
                    if reduce && rows[a].iter().any(|c| c != a && c != b && rows[c].contains(b)) {
                        continue;
                    }
                    out.push((self.names[a].clone(), self.names[b].clone()));
                }
            }
            out
        };
        FrameFile {
            worlds: self.names.clone(),
            leq1: pairs(&self.up1, true),
            leq2: pairs(&self.up2, true),
            r: pairs(&self.succ, false),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn world(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn all(&self) -> WorldSet {
        WorldSet::full(self.len())
    }

    pub fn related(&self, rel: Relation, a: usize, b: usize) -> bool {
        match rel {
            Relation::Leq1 => self.up1[a].contains(b),
            Relation::Leq2 => self.up2[a].contains(b),
            Relation::R => self.succ[a].contains(b),
        }
    }

    /// `{v | w ≤₁ v}`.
    pub fn up1(&self, w: usize) -> WorldSet {
        self.up1[w]
    }

    /// `{v | v ≤₁ w}`.
    pub fn down1(&self, w: usize) -> WorldSet {
        self.down1[w]
    }

    pub fn up2(&self, w: usize) -> WorldSet {
        self.up2[w]
    }

    pub fn down2(&self, w: usize) -> WorldSet {
        self.down2[w]
    }

    /// `R[w] = {v | R w v}`.
    pub fn successors(&self, w: usize) -> WorldSet {
        self.succ[w]
    }

    /// `R⁻¹[w] = {v | R v w}`.
    pub fn predecessors(&self, w: usize) -> WorldSet {
        self.pred[w]
    }

    pub fn set_names(&self, y: WorldSet) -> Vec<String> {
        y.iter().map(|w| self.names[w].clone()).collect()
    }

    pub(crate) fn rows(&self, rel: Relation) -> &[WorldSet] {
        match rel {
            Relation::Leq1 => &self.up1,
            Relation::Leq2 => &self.up2,
            Relation::R => &self.succ,
        }
    }

    /// Least ≤₁-upset containing `y`.
    pub fn upset1(&self, y: WorldSet) -> WorldSet {
        y.iter().fold(WorldSet::EMPTY, |acc, w| acc.union(self.up1[w]))
    }

    /// Interior in the ≤₁-upset topology: `{w | ↑₁w ⊆ y}`.
    pub fn interior1(&self, y: WorldSet) -> WorldSet {
        WorldSet::from_worlds((0..self.len()).filter(|&w| self.up1[w].is_subset(y)))
    }

    /// Closure in the ≤₂-upset topology: `{w | ↑₂w ∩ y ≠ ∅}`.
    pub fn closure2(&self, y: WorldSet) -> WorldSet {
        y.iter().fold(WorldSet::EMPTY, |acc, w| acc.union(self.down2[w]))
    }

    /// `I₁C₂(y)`.
    pub fn nucleus12(&self, y: WorldSet) -> WorldSet {
        self.interior1(self.closure2(y))
    }

    /// `{w | R[w] ⊆ y}`.
    pub fn box_k(&self, y: WorldSet) -> WorldSet {
        WorldSet::from_worlds((0..self.len()).filter(|&w| self.succ[w].is_subset(y)))
    }

    /// `R[y]`, the left adjoint of [`FmFrame::box_k`] on the full powerset.
    pub fn r_image(&self, y: WorldSet) -> WorldSet {
        y.iter().fold(WorldSet::EMPTY, |acc, w| acc.union(self.succ[w]))
    }

    pub fn is_refined_regular_open(&self, y: WorldSet) -> bool {
        self.nucleus12(y) == y
    }

    /// All ≤₁-upsets, in increasing numeric order of their bitsets.
    pub fn upsets1(&self) -> Vec<WorldSet> {
        // Decide worlds from the top down so that every ≤₁-successor of a world
        // is already decided when the world itself is.
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&w| self.up1[w].len());
        let mut out = Vec::new();
        fn go(f: &FmFrame, order: &[usize], k: usize, acc: WorldSet, out: &mut Vec<WorldSet>) {
            if k == order.len() {
                out.push(acc);
                return;
            }
            let w = order[k];
            go(f, order, k + 1, acc, out);
            if f.up1[w].difference(WorldSet::singleton(w)).is_subset(acc) {
                go(f, order, k + 1, acc.with(w), out);
            }
        }
        go(self, &order, 0, WorldSet::EMPTY, &mut out);
        out.sort();
        out
    }

    /// The refined regular open sets `{Y | Y = I₁C₂(Y)}`, sorted.
    pub fn refined_regular_opens(&self) -> Vec<WorldSet> {
        self.upsets1().into_iter().filter(|&y| self.is_refined_regular_open(y)).collect()
    }

    /// Box maps refined regular opens to refined regular opens.
    pub fn check_admissible(&self) -> bool {
        self.admissibility_witness().is_ok()
    }

    fn admissibility_witness(&self) -> Result<(), FrameError> {
        for y in self.refined_regular_opens() {
            let image = self.box_k(y);
            if !self.is_refined_regular_open(image) {
                return Err(FrameError::NotAdmissible {
                    witness: self.set_names(y),
                    image: self.set_names(image),
                });
            }
        }
        Ok(())
    }
}

fn check_partial_order(names: &[String], relation: &'static str, rows: &[WorldSet]) -> Result<(), FrameError> {
    let n = names.len();
    for w in 0..n {
        if !rows[w].contains(w) {
            return Err(FrameError::NotReflexive { relation, world: names[w].clone() });
        }
    }
    for a in 0..n {
        for b in rows[a].iter() {
            for c in rows[b].iter() {
                if !rows[a].contains(c) {
                    return Err(FrameError::NotTransitive {
                        relation,
                        a: names[a].clone(),
                        b: names[b].clone(),
                        c: names[c].clone(),
                    });
                }
            }
            if a != b && rows[b].contains(a) {
                return Err(FrameError::NotAntisymmetric {
                    relation,
                    a: names[a].clone(),
                    b: names[b].clone(),
                });
            }
        }
    }
    Ok(())
}
