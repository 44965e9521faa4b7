//! Brute-force oracles, independent of the parametrized classification:
//! loop isomorphism by backtracking with product propagation, and loop
//! isotopy via the classical reduction to principal isotopes.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::table::LoopTable;

/// A verified isomorphism L1 → L2 as a permutation of element indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IsoWitness {
    pub map: Vec<usize>,
}

/// Cheap isomorphism invariants used to refuse a search before it starts:
/// order, number of solutions of x·x = e, the multiset of left-power orders
/// (cycle length of the identity under right translation), and the number of
/// idempotents.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Fingerprint {
    pub n: usize,
    pub involutions: usize,
    pub orders: Vec<usize>,
    pub idempotents: usize,
}

pub fn fingerprint(table: &LoopTable) -> Fingerprint {
    let n = table.n();
    let e = table.identity();
    let involutions = (0..n).filter(|&x| table.get(x, x) == e).count();
    let idempotents = (0..n).filter(|&x| table.get(x, x) == x).count();
    let mut orders: Vec<usize> = (0..n).map(|x| table.left_power_order(x)).collect();
    orders.sort_unstable();
    Fingerprint { n, involutions, orders, idempotents }
}

/// The principal isotope Q_{a,b} with x∘y = (x/b)·(a\y), a loop with
/// identity a·b.
pub fn principal_isotope(table: &LoopTable, a: usize, b: usize) -> Result<LoopTable> {
    if a >= table.n() || b >= table.n() {
        return Err(Error::InvalidInput(format!(
            "isotope indices ({a},{b}) out of range for order {}",
            table.n()
        )));
    }
    if !table.is_latin() {
        return Err(Error::InvalidInput(
            "principal isotopes are only defined for latin tables".into(),
        ));
    }
    Ok(isotope_unchecked(table, a, b))
}

fn isotope_unchecked(table: &LoopTable, a: usize, b: usize) -> LoopTable {
    let n = table.n();
    // rdiv[x] = z with z·b = x; ldiv[y] = w with a·w = y
    let mut rdiv = vec![0usize; n];
    let mut ldiv = vec![0usize; n];
    for z in 0..n {
        rdiv[table.get(z, b)] = z;
    }
    for w in 0..n {
        ldiv[table.get(a, w)] = w;
    }
    let mut entries = vec![0u32; n * n];
    for x in 0..n {
        let xr = rdiv[x];
        for y in 0..n {
            entries[x * n + y] = table.get(xr, ldiv[y]) as u32;
        }
    }
    LoopTable::with_identity(n, entries, table.get(a, b))
}

struct SearchState {
    img: Vec<Option<u32>>,
    used: Vec<bool>,
    trail: Vec<u32>,
    queue: Vec<u32>,
}

struct Search<'a> {
    l1: &'a LoopTable,
    l2: &'a LoopTable,
    ord1: Vec<usize>,
    ord2: Vec<usize>,
}

impl Search<'_> {
    /// Record x ↦ y, or report a conflict.  Already-consistent assignments
    /// are accepted without re-queueing.
    fn assign(&self, st: &mut SearchState, x: usize, y: usize) -> bool {
        if let Some(cur) = st.img[x] {
            return cur as usize == y;
        }
        if st.used[y] || self.ord1[x] != self.ord2[y] {
            return false;
        }
        st.img[x] = Some(y as u32);
        st.used[y] = true;
        st.trail.push(x as u32);
        st.queue.push(x as u32);
        true
    }

    /// Close the partial map under products: whenever x and a are mapped,
    /// x·a and a·x must map to the corresponding products in L2.
    fn propagate(&self, st: &mut SearchState) -> bool {
        while let Some(x) = st.queue.pop() {
            let x = x as usize;
            let y = st.img[x].expect("queued elements are mapped") as usize;
            let mut idx = 0;
            while idx < st.trail.len() {
                let a = st.trail[idx] as usize;
                idx += 1;
                let b = st.img[a].expect("trailed elements are mapped") as usize;
                if !self.assign(st, self.l1.get(x, a), self.l2.get(y, b)) {
                    return false;
                }
                if !self.assign(st, self.l1.get(a, x), self.l2.get(b, y)) {
                    return false;
                }
            }
        }
        true
    }

    fn undo_to(&self, st: &mut SearchState, checkpoint: usize) {
        while st.trail.len() > checkpoint {
            let x = st.trail.pop().expect("trail nonempty") as usize;
            let y = st.img[x].take().expect("trailed elements are mapped");
            st.used[y as usize] = false;
        }
        st.queue.clear();
    }

    /// Depth-first extension in ascending element order, so any witness
    /// found is the deterministic least one in the induced search order.
    fn extend(&self, st: &mut SearchState) -> bool {
        let n = self.l1.n();
        let Some(x) = (0..n).find(|&x| st.img[x].is_none()) else {
            return true;
        };
        for y in 0..n {
            if st.used[y] || self.ord1[x] != self.ord2[y] {
                continue;
            }
            let checkpoint = st.trail.len();
            if self.assign(st, x, y) && self.propagate(st) && self.extend(st) {
                return true;
            }
            self.undo_to(st, checkpoint);
        }
        false
    }
}

/// Backtracking isomorphism search.  Returns a verified witness, or None if
/// the fingerprints differ or the search space is exhausted.
pub fn brute_isomorphic(l1: &LoopTable, l2: &LoopTable) -> Option<IsoWitness> {
    let n = l1.n();
    if n != l2.n() {
        return None;
    }
    if fingerprint(l1) != fingerprint(l2) {
        return None;
    }
    let search = Search {
        l1,
        l2,
        ord1: (0..n).map(|x| l1.left_power_order(x)).collect(),
        ord2: (0..n).map(|x| l2.left_power_order(x)).collect(),
    };
    let mut st = SearchState {
        img: vec![None; n],
        used: vec![false; n],
        trail: Vec::with_capacity(n),
        queue: Vec::with_capacity(n),
    };
    if !search.assign(&mut st, l1.identity(), l2.identity()) || !search.propagate(&mut st) {
        return None;
    }
    if !search.extend(&mut st) {
        return None;
    }
    let map: Vec<usize> = st.img.iter().map(|v| v.expect("complete") as usize).collect();
    debug_assert!(
        (0..n).all(|x| (0..n).all(|y| map[l1.get(x, y)] == l2.get(map[x], map[y]))),
        "search produced a non-homomorphism"
    );
    Some(IsoWitness { map })
}

/// Loop isotopy via the classical reduction: L1 and L2 are isotopic iff L2
/// is isomorphic to some principal isotope of L1.  The n² isotopes are
/// searched in parallel; the boolean result is order-independent.
pub fn brute_isotopic(l1: &LoopTable, l2: &LoopTable) -> bool {
    let n = l1.n();
    if n != l2.n() {
        return false;
    }
    if !l1.is_latin() || !l2.is_latin() {
        return false;
    }
    (0..n * n).into_par_iter().any(|ab| {
        let isotope = isotope_unchecked(l1, ab / n, ab % n);
        brute_isomorphic(&isotope, l2).is_some()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldParams, Fp2};

    fn p73() -> FieldParams {
        FieldParams::new(7, 3).unwrap()
    }

    fn table73(g: u64) -> LoopTable {
        LoopTable::from_gamma(&p73(), Fp2::real(g)).unwrap()
    }

    #[test]
    fn identity_isomorphism() {
        let t = LoopTable::cyclic(5, 3).unwrap();
        let w = brute_isomorphic(&t, &t).unwrap();
        assert_eq!(w.map, (0..15).collect::<Vec<_>>());
    }

    #[test]
    fn witness_verifies() {
        let t1 = table73(0);
        let t2 = table73(1);
        let w = brute_isomorphic(&t1, &t2).expect("gamma 0 and 1 share an f-orbit");
        let n = t1.n();
        assert_eq!(w.map[t1.identity()], t2.identity());
        for x in 0..n {
            for y in 0..n {
                assert_eq!(w.map[t1.get(x, y)], t2.get(w.map[x], w.map[y]));
            }
        }
        // symmetric direction also succeeds
        assert!(brute_isomorphic(&t2, &t1).is_some());
    }

    #[test]
    fn distinct_f_orbits_not_isomorphic() {
        assert!(brute_isomorphic(&table73(4), &table73(3)).is_none());
        assert!(brute_isomorphic(&table73(0), &table73(3)).is_none());
        let cyclic = LoopTable::cyclic(7, 3).unwrap();
        assert!(brute_isomorphic(&cyclic, &table73(0)).is_none());
    }

    #[test]
    fn fingerprints() {
        let t = LoopTable::cyclic(5, 3).unwrap();
        let fp = fingerprint(&t);
        assert_eq!(fp.n, 15);
        assert_eq!(fp.idempotents, 1);
        assert_eq!(fp.involutions, 1); // only e in odd order
        assert_eq!(fingerprint(&t), fingerprint(&t));
        assert_ne!(fingerprint(&t), fingerprint(&table73(0)));
    }

    #[test]
    fn principal_isotope_basics() {
        let t = LoopTable::cyclic(5, 3).unwrap();
        // a = b = identity gives the table back
        let same = principal_isotope(&t, 0, 0).unwrap();
        assert_eq!(same, t);
        // any isotope of a group is isomorphic to it
        for (a, b) in [(1, 2), (7, 3), (14, 14)] {
            let iso = principal_isotope(&t, a, b).unwrap();
            assert!(iso.is_latin());
            assert_eq!(iso.identity(), t.get(a, b));
            assert!(brute_isomorphic(&iso, &t).is_some());
        }
    }

    #[test]
    fn principal_isotope_of_bruck_loop() {
        let params = FieldParams::new(5, 3).unwrap();
        let t = LoopTable::from_gamma(&params, Fp2::real(3)).unwrap();
        let iso = principal_isotope(&t, 0 * 5 + 1, 1 * 5 + 0).unwrap();
        assert!(iso.is_latin());
        assert_eq!(iso.identity(), t.get(1, 5));
        // identity of the isotope is two-sided
        let e = iso.identity();
        for x in 0..15 {
            assert_eq!(iso.get(e, x), x);
            assert_eq!(iso.get(x, e), x);
        }
    }

    #[test]
    fn principal_isotope_rejects_bad_input() {
        let t = LoopTable::cyclic(3, 5).unwrap();
        assert!(principal_isotope(&t, 99, 0).is_err());
        let non_latin = LoopTable::from_rows(vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert!(principal_isotope(&non_latin, 0, 0).is_err());
    }

    #[test]
    fn isotopy_examples() {
        let t = table73(1);
        assert!(brute_isotopic(&t, &t));
        // gamma = 1 and gamma = 4 lie in different <f,g>-orbits
        assert!(!brute_isotopic(&table73(1), &table73(4)));
        // gamma = 3 and gamma = 4 share one
        assert!(brute_isotopic(&table73(3), &table73(4)));
        // order mismatch
        assert!(!brute_isotopic(&LoopTable::cyclic(5, 3).unwrap(), &t));
    }

    #[test]
    fn isotopy_at_order_15() {
        let params = FieldParams::new(5, 3).unwrap();
        let bruck = LoopTable::from_gamma(&params, Fp2::real(3)).unwrap();
        let other = LoopTable::from_gamma(&params, Fp2::new(3, 2)).unwrap();
        assert!(brute_isotopic(&other, &bruck));
        let cyclic = LoopTable::cyclic(5, 3).unwrap();
        assert!(!brute_isotopic(&cyclic, &bruck));
    }
}
