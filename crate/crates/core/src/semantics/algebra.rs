use super::frame::FmFrame;
use super::worldset::WorldSet;
use std::collections::HashMap;

/// The complete Heyting algebra with operator of refined regular open sets of
/// a frame, together with the closure map `c` and the black diamond.
#[derive(Clone, Debug)]
pub struct RoAlgebra {
    frame: FmFrame,
    members: Vec<WorldSet>,
    index: HashMap<WorldSet, usize>,
    /// `c({w})` for every world.
    nominals: Vec<WorldSet>,
}

impl RoAlgebra {
    pub fn new(frame: &FmFrame) -> RoAlgebra {
        let members = frame.refined_regular_opens();
        let index = members.iter().enumerate().map(|(k, &y)| (y, k)).collect();
        let nominals = (0..frame.len())
            .map(|w| frame.nucleus12(frame.upset1(WorldSet::singleton(w))))
            .collect();
        RoAlgebra { frame: frame.clone(), members, index, nominals }
    }

    pub fn frame(&self) -> &FmFrame {
        &self.frame
    }

    /// The carrier, sorted by bitset value.
    pub fn members(&self) -> &[WorldSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, y: WorldSet) -> bool {
        self.index.contains_key(&y)
    }

    pub fn position(&self, y: WorldSet) -> Option<usize> {
        self.index.get(&y).copied()
    }

    pub fn bottom(&self) -> WorldSet {
        WorldSet::EMPTY
    }

    pub fn top(&self) -> WorldSet {
        self.frame.all()
    }

    pub fn meet(&self, y: WorldSet, z: WorldSet) -> WorldSet {
        y.intersection(z)
    }

    pub fn join(&self, y: WorldSet, z: WorldSet) -> WorldSet {
        self.frame.nucleus12(y.union(z))
    }

    pub fn implies(&self, y: WorldSet, z: WorldSet) -> WorldSet {
        self.frame.interior1(self.top().difference(y).union(z))
    }

    pub fn boxed(&self, y: WorldSet) -> WorldSet {
        self.frame.box_k(y)
    }

    /// Refined regular open closure: `I₁C₂(↑₁y)`.
    pub fn closure(&self, y: WorldSet) -> WorldSet {
        self.frame.nucleus12(self.frame.upset1(y))
    }

    /// `◆y = c(R[y])`.
    pub fn diamond(&self, y: WorldSet) -> WorldSet {
        self.closure(self.frame.r_image(y))
    }

    /// `c({w})`, the value of a nominal pointing at `w`.
    pub fn nominal(&self, w: usize) -> WorldSet {
        self.nominals[w]
    }

    /// Distinct values of `c({w})` with the least world producing each.
    pub fn nominal_values(&self) -> Vec<(usize, WorldSet)> {
        let mut seen = Vec::<(usize, WorldSet)>::new();
        for (w, &v) in self.nominals.iter().enumerate() {
            if !seen.iter().any(|&(_, u)| u == v) {
                seen.push((w, v));
            }
        }
        seen
    }

    pub fn big_join<I: IntoIterator<Item = WorldSet>>(&self, ys: I) -> WorldSet {
        let u = ys.into_iter().fold(WorldSet::EMPTY, WorldSet::union);
        self.frame.nucleus12(u)
    }

    pub fn big_meet<I: IntoIterator<Item = WorldSet>>(&self, ys: I) -> WorldSet {
        ys.into_iter().fold(self.top(), WorldSet::intersection)
    }

    /// `c` computed as the meet of all members above `y`.
    pub fn closure_by_meet(&self, y: WorldSet) -> WorldSet {
        self.big_meet(self.members.iter().copied().filter(|&z| y.is_subset(z)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(xs: &[usize]) -> WorldSet {
        WorldSet::from_worlds(xs.iter().copied())
    }

    #[test]
    fn closure_agrees_with_meet_of_members_above() {
        let f = FmFrame::from_generators::<&str>(&["a", "b"], &[("a", "b")], &[], &[]).unwrap();
        let alg = RoAlgebra::new(&f);
        assert_eq!(alg.closure(ws(&[0])), ws(&[0, 1]));
        assert_eq!(alg.closure_by_meet(ws(&[0])), ws(&[0, 1]));
        assert_eq!(alg.closure(WorldSet::EMPTY), WorldSet::EMPTY);
        for &z in alg.members() {
            assert_eq!(alg.closure(z), z);
        }
    }

    #[test]
    fn black_diamond() {
        let f = FmFrame::from_generators(&["a", "b"], &[("a", "b")], &[], &[("a", "b")]).unwrap();
        let alg = RoAlgebra::new(&f);
        assert_eq!(alg.diamond(ws(&[0, 1])), ws(&[1]));

        let g = FmFrame::from_generators::<&str>(&["a", "b"], &[("a", "b")], &[], &[]).unwrap();
        let alg = RoAlgebra::new(&g);
        for &y in alg.members() {
            assert_eq!(alg.diamond(y), WorldSet::EMPTY);
        }
    }

    #[test]
    fn diamond_box_adjunction_on_three_points() {
        let f = FmFrame::from_generators(
            &["a", "b", "c"],
            &[("a", "b"), ("a", "c")],
            &[("a", "b")],
            &[("a", "a"), ("c", "b")],
        );
        let Ok(f) = f else { return };
        let alg = RoAlgebra::new(&f);
        for &y in alg.members() {
            for &z in alg.members() {
                assert_eq!(alg.diamond(y).is_subset(z), y.is_subset(alg.boxed(z)));
            }
        }
    }

    #[test]
    fn nominal_values_deduplicate() {
        let g = FmFrame::from_generators::<&str>(&["a", "b"], &[("a", "b")], &[("a", "b")], &[]).unwrap();
        let alg = RoAlgebra::new(&g);
        assert_eq!(alg.nominal_values(), vec![(0, ws(&[0, 1]))]);
    }
}
