use crate::semantics::{FmFrame, WorldSet};
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

pub const MAX_ENUMERATION_SIZE: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("frame size {0} is outside 1..={MAX_ENUMERATION_SIZE}")]
    SizeOutOfRange(usize),
}

/// World names used for generated frames: `a`, `b`, `c`, ...
pub fn world_names(n: usize) -> Vec<String> {
    (0..n).map(|k| ((b'a' + k as u8) as char).to_string()).collect()
}

fn transitive(rows: &[WorldSet]) -> bool {
    rows.iter().all(|&r| r.iter().all(|v| rows[v].is_subset(r)))
}

fn off_diagonal(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b {
                out.push((a, b));
            }
        }
    }
    out
}

fn rows_from_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> Vec<WorldSet> {
    let mut rows: Vec<WorldSet> = (0..n).map(WorldSet::singleton).collect();
    for (k, &(a, b)) in pairs.iter().enumerate() {
        if mask >> k & 1 == 1 {
            rows[a] = rows[a].with(b);
        }
    }
    rows
}

/// Every partial order on `n` labelled points, as successor rows, in
/// increasing order of the bitmask over off-diagonal pairs.
pub fn partial_orders(n: usize) -> Vec<Vec<WorldSet>> {
    let pairs = off_diagonal(n);
    let mut out = Vec::new();
    for mask in 0..1u64 << pairs.len() {
        let antisymmetric = pairs.iter().enumerate().all(|(k, &(a, b))| {
            let back = pairs.iter().position(|&p| p == (b, a)).unwrap();
            mask >> k & 1 == 0 || mask >> back & 1 == 0
        });
        if !antisymmetric {
            continue;
        }
        let rows = rows_from_mask(n, &pairs, mask);
        if transitive(&rows) {
            out.push(rows);
        }
    }
    out
}

/// Every partial order contained in `leq1`, in increasing submask order.
pub fn sub_orders(leq1: &[WorldSet]) -> Vec<Vec<WorldSet>> {
    let n = leq1.len();
    let pairs: Vec<(usize, usize)> = off_diagonal(n).into_iter().filter(|&(a, b)| leq1[a].contains(b)).collect();
    let mut out = Vec::new();
    for mask in 0..1u64 << pairs.len() {
        let rows = rows_from_mask(n, &pairs, mask);
        if transitive(&rows) {
            out.push(rows);
        }
    }
    out
}

/// Every admissible accessibility relation for the orders of `base`, in
/// lexicographic order of the successor rows.
///
/// Admissibility forces `R[v] ⊆ c(R[w])` whenever `w ≤₁ v`, because `□Y` must
/// be a ≤₁-upset for every refined regular open `Y`; that test prunes the
/// search before the full check.
fn admissible_relations(base: &FmFrame) -> Vec<Vec<WorldSet>> {
    let n = base.len();
    let closure: Vec<WorldSet> = (0..1u64 << n)
        .map(|bits| base.nucleus12(base.upset1(WorldSet(bits))))
        .collect();
    let opens = base.refined_regular_opens();
    let mut out = Vec::new();
    let mut rows = vec![WorldSet::EMPTY; n];
    fn go(
        base: &FmFrame,
        closure: &[WorldSet],
        opens: &[WorldSet],
        w: usize,
        rows: &mut Vec<WorldSet>,
        out: &mut Vec<Vec<WorldSet>>,
    ) {
        let n = base.len();
        if w == n {
            let boxed = |y: WorldSet| WorldSet::from_worlds((0..n).filter(|&v| rows[v].is_subset(y)));
            if opens.iter().all(|&y| base.is_refined_regular_open(boxed(y))) {
                out.push(rows.clone());
            }
            return;
        }
        for bits in 0..1u64 << n {
            let row = WorldSet(bits);
            let consistent = (0..w).all(|v| {
                (!base.up1(v).contains(w) || row.is_subset(closure[rows[v].0 as usize]))
                    && (!base.up1(w).contains(v) || rows[v].is_subset(closure[bits as usize]))
            });
            if consistent {
                rows[w] = row;
                go(base, closure, opens, w + 1, rows, out);
            }
        }
        rows[w] = WorldSet::EMPTY;
    }
    go(base, &closure, &opens, 0, &mut rows, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn heap(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(perm.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, out);
            if k.is_multiple_of(2) {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut perm, &mut out);
    out
}

fn encode(rows: [&[WorldSet]; 3], perm: &[usize]) -> Vec<u64> {
    let n = perm.len();
    let mut out = Vec::with_capacity(3 * n);
    for rel in rows {
        let mut permuted = vec![0u64; n];
        for (a, row) in rel.iter().enumerate() {
            permuted[perm[a]] = row.iter().fold(0u64, |acc, b| acc | 1 << perm[b]);
        }
        out.extend(permuted);
    }
    out
}

/// Whether the frame's encoding is least among all relabellings of its worlds.
pub fn is_canonical(frame: &FmFrame, perms: &[Vec<usize>]) -> bool {
    let n = frame.len();
    let up1: Vec<WorldSet> = (0..n).map(|w| frame.up1(w)).collect();
    let up2: Vec<WorldSet> = (0..n).map(|w| frame.up2(w)).collect();
    let succ: Vec<WorldSet> = (0..n).map(|w| frame.successors(w)).collect();
    let rows = [&up1[..], &up2[..], &succ[..]];
    let identity: Vec<usize> = (0..n).collect();
    let own = encode(rows, &identity);
    perms.iter().all(|p| encode(rows, p) >= own)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Keep only one labelling of each isomorphism class.
    pub canonical: bool,
}

/// All modal FM frames on `n` labelled worlds, in a fixed order: by `≤₁`,
/// then `≤₂`, then `R`.
pub fn enumerate_frames(
    n: usize,
    options: EnumerationOptions,
) -> Result<impl Iterator<Item = FmFrame>, EnumerationError> {
    if !(1..=MAX_ENUMERATION_SIZE).contains(&n) {
        return Err(EnumerationError::SizeOutOfRange(n));
    }
    let names = world_names(n);
    let perms = if options.canonical { permutations(n) } else { Vec::new() };
    let pairs = partial_orders(n)
        .into_iter()
        .flat_map(|l1| sub_orders(&l1).into_iter().map(move |l2| (l1.clone(), l2)));
    Ok(pairs.flat_map(move |(l1, l2)| {
        let base = FmFrame::from_rows_unchecked(names.clone(), l1.clone(), l2.clone(), vec![WorldSet::EMPTY; n]);
        let names = names.clone();
        let perms = perms.clone();
        admissible_relations(&base).into_iter().filter_map(move |r| {
            let frame = FmFrame::from_rows_unchecked(names.clone(), l1.clone(), l2.clone(), r);
            (perms.is_empty() || is_canonical(&frame, &perms)).then_some(frame)
        })
    }))
}

/// All frames of every size from 1 to `max_n`.
pub fn frames_up_to(max_n: usize, options: EnumerationOptions) -> Result<Vec<FmFrame>, EnumerationError> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(enumerate_frames(n, options)?);
    }
    Ok(out)
}

/// Draws `count` admissible frames on `n` worlds, uniformly over orders and
/// rows and rejecting inadmissible relations. Duplicates are possible.
pub fn sample_frames<R: Rng>(n: usize, count: usize, rng: &mut R) -> Vec<FmFrame> {
    let names = world_names(n);
    let orders = partial_orders(n);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let l1 = orders.choose(rng).expect("at least the discrete order").clone();
        let l2 = sub_orders(&l1).choose(rng).expect("at least the discrete order").clone();
        let r: Vec<WorldSet> = (0..n).map(|_| WorldSet(rng.gen_range(0..1u64 << n))).collect();
        let frame = FmFrame::from_rows_unchecked(names.clone(), l1, l2, r);
        if frame.check_admissible() {
            out.push(frame);
        }
    }
    out
}
