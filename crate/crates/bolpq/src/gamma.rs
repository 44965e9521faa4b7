//! The admissible parameter set Γ, the actions f: γ ↦ 1−γ and
//! g_r: γ ↦ γω^r / (γω^r + (1−γ)ω^{−r}), and orbit enumeration.
//!
//! Orbits of ⟨f⟩ on Γ index the non-cyclic loops up to isomorphism, orbits of
//! ⟨f,g⟩ index them up to isotopism, and ⟨f,g⟩ is dihedral of order 2q.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::{Branch, FieldParams, Fp2};

/// The admissible set Γ, sorted by the canonical (re, im) order.
///
/// When q | p−1 it is {γ ∈ F_p : γ = 0 or 1−γ⁻¹ ∉ ⟨ω⟩}; when q | p+1 it is
/// {γ ∈ 1/2 + F_p√t : 1−γ⁻¹ ∉ ⟨ω⟩}.  Its cardinality is p − q + 1.
#[derive(Clone, Debug)]
pub struct GammaSet {
    elements: Vec<Fp2>,
    branch: Branch,
}

impl GammaSet {
    pub fn elements(&self) -> &[Fp2] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn contains(&self, gamma: Fp2) -> bool {
        self.elements.binary_search(&gamma).is_ok()
    }
}

/// Exhaustive scan of the p candidates, mirroring the definition of Γ.
pub fn build_gamma_set(params: &FieldParams) -> GammaSet {
    let p = params.p();
    let mut elements = Vec::new();
    match params.branch() {
        Branch::QDividesPMinus1 => {
            for g in 0..p {
                let gamma = Fp2::real(g);
                if g == 0 {
                    elements.push(gamma);
                    continue;
                }
                let inv = params.inv(gamma).expect("gamma nonzero");
                let val = params.sub(Fp2::ONE, inv);
                if !params.omega_subgroup_contains(val) {
                    elements.push(gamma);
                }
            }
        }
        Branch::QDividesPPlus1 => {
            let half = (p + 1) / 2;
            for v in 0..p {
                let gamma = Fp2::new(half, v);
                // re = 1/2 != 0, so gamma is invertible
                let inv = params.inv(gamma).expect("gamma nonzero");
                let val = params.sub(Fp2::ONE, inv);
                if !params.omega_subgroup_contains(val) {
                    elements.push(gamma);
                }
            }
        }
    }
    elements.sort_unstable();
    GammaSet { elements, branch: params.branch() }
}

/// f: γ ↦ 1 − γ.
pub fn act_f(params: &FieldParams, gamma: Fp2) -> Fp2 {
    params.sub(Fp2::ONE, gamma)
}

/// g_r: γ ↦ γω^r / (γω^r + (1−γ)ω^{−r}).  The denominator is u(γ)_r, which
/// is nonzero exactly when γ is admissible.
pub fn act_g_r(params: &FieldParams, gamma: Fp2, r: u64) -> Result<Fp2> {
    let r = (r as i64).rem_euclid(params.q() as i64);
    let num = params.mul(gamma, params.omega_pow(r));
    let den = params.add(
        num,
        params.mul(params.sub(Fp2::ONE, gamma), params.omega_pow(-r)),
    );
    if den.is_zero() {
        return Err(Error::DegenerateGamma { gamma });
    }
    Ok(params.mul(num, params.inv(den)?))
}

/// An element f^a g^r of the dihedral group ⟨f,g⟩, acting by function
/// composition: γ ↦ f^a(g^r(γ)) (g applied first).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ActionElement {
    flip: bool,
    rot: u64,
}

impl ActionElement {
    pub fn new(flip: bool, rot: u64, q: u64) -> Self {
        ActionElement { flip, rot: rot % q }
    }

    pub fn identity() -> Self {
        ActionElement { flip: false, rot: 0 }
    }

    /// The reflection f.
    pub fn f() -> Self {
        ActionElement { flip: true, rot: 0 }
    }

    /// The rotation g^r.
    pub fn g(r: u64, q: u64) -> Self {
        ActionElement { flip: false, rot: r % q }
    }

    /// f ∘ g^r.
    pub fn fg(r: u64, q: u64) -> Self {
        ActionElement { flip: true, rot: r % q }
    }

    pub fn is_identity(&self) -> bool {
        !self.flip && self.rot == 0
    }

    pub fn flip(&self) -> bool {
        self.flip
    }

    pub fn rot(&self) -> u64 {
        self.rot
    }

    pub fn apply(&self, params: &FieldParams, gamma: Fp2) -> Result<Fp2> {
        let mut x = act_g_r(params, gamma, self.rot)?;
        if self.flip {
            x = act_f(params, x);
        }
        Ok(x)
    }

    /// The element whose action is `next ∘ self` (apply self first), reduced
    /// to normal form via g^s ∘ f = f ∘ g^{−s}.
    pub fn then(&self, next: ActionElement, q: u64) -> ActionElement {
        if !self.flip {
            ActionElement { flip: next.flip, rot: (self.rot + next.rot) % q }
        } else {
            ActionElement {
                flip: !next.flip,
                rot: (self.rot + q - next.rot % q) % q,
            }
        }
    }
}

/// Which generators to close orbits under.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GeneratorSet {
    /// ⟨f⟩ — isomorphism classes.
    F,
    /// ⟨g⟩ — companion classes.
    G,
    /// ⟨f,g⟩ — isotopism classes.
    FG,
}

/// A partition of Γ into orbits.  Each orbit is sorted; orbits are sorted by
/// their least element, which serves as the canonical representative.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    orbits: Vec<Vec<Fp2>>,
}

impl OrbitPartition {
    pub fn orbits(&self) -> &[Vec<Fp2>] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn representatives(&self) -> Vec<Fp2> {
        self.orbits.iter().map(|o| o[0]).collect()
    }

    pub fn orbit_of(&self, gamma: Fp2) -> Option<&[Fp2]> {
        self.orbits
            .iter()
            .find(|o| o.binary_search(&gamma).is_ok())
            .map(|o| o.as_slice())
    }

    /// Index of the orbit containing γ.
    pub fn class_of(&self, gamma: Fp2) -> Option<usize> {
        self.orbits.iter().position(|o| o.binary_search(&gamma).is_ok())
    }
}

/// Breadth-first closure of each point under the chosen generator maps.
/// Errors if a generator image ever leaves Γ, which would indicate an
/// inadmissible input set.
pub fn orbit_partition(
    params: &FieldParams,
    gset: &GammaSet,
    gens: GeneratorSet,
) -> Result<OrbitPartition> {
    let universe: HashSet<Fp2> = gset.elements().iter().copied().collect();
    let mut seen: HashSet<Fp2> = HashSet::new();
    let mut orbits = Vec::new();
    for &start in gset.elements() {
        if seen.contains(&start) {
            continue;
        }
        let mut orbit = Vec::new();
        let mut frontier = vec![start];
        seen.insert(start);
        while let Some(x) = frontier.pop() {
            orbit.push(x);
            let mut images = Vec::with_capacity(2);
            if matches!(gens, GeneratorSet::F | GeneratorSet::FG) {
                images.push(act_f(params, x));
            }
            if matches!(gens, GeneratorSet::G | GeneratorSet::FG) {
                images.push(act_g_r(params, x, 1)?);
            }
            for y in images {
                if !universe.contains(&y) {
                    return Err(Error::InvalidInput(format!(
                        "orbit of {start} left the admissible set at {y}"
                    )));
                }
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits.sort_unstable_by_key(|o| o[0]);
    Ok(OrbitPartition { orbits })
}

/// Scan Γ for the fixed points of a non-identity element of ⟨f,g⟩.
///
/// Closed forms (verified by the acceptance suite): f fixes only 1/2; g^i
/// fixes {0, 1} when q | p−1 and nothing when q | p+1; f∘g^i fixes only
/// (1+ω^i)⁻¹.
pub fn fixed_points(
    params: &FieldParams,
    elem: ActionElement,
    gset: &GammaSet,
) -> Result<Vec<Fp2>> {
    if elem.is_identity() {
        return Err(Error::InvalidInput(
            "the identity fixes every point of the admissible set".into(),
        ));
    }
    let mut fixed = Vec::new();
    for &gamma in gset.elements() {
        if elem.apply(params, gamma)? == gamma {
            fixed.push(gamma);
        }
    }
    Ok(fixed)
}

/// Pointwise verification on Γ of the dihedral presentation: f² = id,
/// g^q = id, g∘f = f∘g⁻¹, and g_r ∘ g_s = g_{r+s} for all r, s.
pub fn dihedral_check(params: &FieldParams, gset: &GammaSet) -> Result<bool> {
    let q = params.q();
    for &gamma in gset.elements() {
        if act_f(params, act_f(params, gamma)) != gamma {
            return Ok(false);
        }
        let mut x = gamma;
        for _ in 0..q {
            x = act_g_r(params, x, 1)?;
        }
        if x != gamma {
            return Ok(false);
        }
        // g(f(gamma)) = f(g^{q-1}(gamma))
        let lhs = act_g_r(params, act_f(params, gamma), 1)?;
        let rhs = act_f(params, act_g_r(params, gamma, q - 1)?);
        if lhs != rhs {
            return Ok(false);
        }
        for r in 0..q {
            for s in 0..q {
                let two_step = act_g_r(params, act_g_r(params, gamma, s)?, r)?;
                let one_step = act_g_r(params, gamma, (r + s) % q)?;
                if two_step != one_step {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p53() -> FieldParams {
        FieldParams::new(5, 3).unwrap()
    }

    fn p73() -> FieldParams {
        FieldParams::new(7, 3).unwrap()
    }

    #[test]
    fn gamma_set_split_branch() {
        let params = p73();
        let gs = build_gamma_set(&params);
        let expect: Vec<Fp2> = [0u64, 1, 3, 4, 5].iter().map(|&g| Fp2::real(g)).collect();
        assert_eq!(gs.elements(), expect.as_slice());
        assert_eq!(gs.len(), 7 - 3 + 1);
        assert!(gs.contains(params.half())); // 1/2 = 4
    }

    #[test]
    fn gamma_set_inert_branch() {
        let params = p53();
        let gs = build_gamma_set(&params);
        let expect = vec![Fp2::real(3), Fp2::new(3, 2), Fp2::new(3, 3)];
        assert_eq!(gs.elements(), expect.as_slice());
        assert_eq!(gs.len(), 5 - 3 + 1);
        assert!(gs.contains(params.half()));
        assert!(!gs.contains(Fp2::ZERO));
        assert!(!gs.contains(Fp2::ONE));
    }

    #[test]
    fn f_action() {
        let params = p73();
        assert_eq!(act_f(&params, params.half()), params.half());
        assert_eq!(act_f(&params, Fp2::real(3)), Fp2::real(5));
        assert_eq!(act_f(&params, Fp2::ZERO), Fp2::ONE);
        assert_eq!(act_f(&params, Fp2::ONE), Fp2::ZERO);
    }

    #[test]
    fn g_action() {
        let params = p73();
        // g_1(4) = 3 and g_2(4) = 5; the orbit of 1/2 = 4 under g is {3,4,5}
        assert_eq!(act_g_r(&params, Fp2::real(4), 1).unwrap(), Fp2::real(3));
        assert_eq!(act_g_r(&params, Fp2::real(4), 2).unwrap(), Fp2::real(5));
        assert_eq!(act_g_r(&params, Fp2::real(4), 0).unwrap(), Fp2::real(4));
        // 0 and 1 are fixed by every g_r
        for r in 0..3 {
            assert_eq!(act_g_r(&params, Fp2::ZERO, r).unwrap(), Fp2::ZERO);
            assert_eq!(act_g_r(&params, Fp2::ONE, r).unwrap(), Fp2::ONE);
        }
    }

    #[test]
    fn g_action_degenerate() {
        // gamma = 3 + sqrt(2) over (5,3) has u(gamma)_2 = 0
        let params = p53();
        assert!(matches!(
            act_g_r(&params, Fp2::new(3, 1), 2),
            Err(Error::DegenerateGamma { .. })
        ));
    }

    #[test]
    fn orbit_partitions() {
        let params = p73();
        let gs = build_gamma_set(&params);
        let f = orbit_partition(&params, &gs, GeneratorSet::F).unwrap();
        let expect_f = vec![
            vec![Fp2::ZERO, Fp2::ONE],
            vec![Fp2::real(3), Fp2::real(5)],
            vec![Fp2::real(4)],
        ];
        assert_eq!(f.orbits(), expect_f.as_slice());
        let fg = orbit_partition(&params, &gs, GeneratorSet::FG).unwrap();
        let expect_fg = vec![
            vec![Fp2::ZERO, Fp2::ONE],
            vec![Fp2::real(3), Fp2::real(4), Fp2::real(5)],
        ];
        assert_eq!(fg.orbits(), expect_fg.as_slice());
        assert_eq!(fg.class_of(Fp2::real(4)), Some(1));
        assert_eq!(fg.class_of(Fp2::real(2)), None);

        let params = p53();
        let gs = build_gamma_set(&params);
        let f = orbit_partition(&params, &gs, GeneratorSet::F).unwrap();
        let expect_f = vec![
            vec![Fp2::real(3)],
            vec![Fp2::new(3, 2), Fp2::new(3, 3)],
        ];
        assert_eq!(f.orbits(), expect_f.as_slice());
        let fg = orbit_partition(&params, &gs, GeneratorSet::FG).unwrap();
        assert_eq!(fg.len(), 1);
        assert_eq!(fg.orbits()[0].len(), 3);
    }

    #[test]
    fn fixed_point_scan() {
        let params = p73();
        let gs = build_gamma_set(&params);
        // f fixes only 1/2
        let fx = fixed_points(&params, ActionElement::f(), &gs).unwrap();
        assert_eq!(fx, vec![Fp2::real(4)]);
        // g^i fixes 0 and 1 in the split branch
        for i in 1..3 {
            let fx = fixed_points(&params, ActionElement::g(i, 3), &gs).unwrap();
            assert_eq!(fx, vec![Fp2::ZERO, Fp2::ONE]);
        }
        // f∘g^1 fixes (1+omega)^{-1} = 5^{-1} = 3
        let fx = fixed_points(&params, ActionElement::fg(1, 3), &gs).unwrap();
        assert_eq!(fx, vec![Fp2::real(3)]);
        let closed = params.inv(params.add(Fp2::ONE, params.omega_pow(1))).unwrap();
        assert_eq!(fx, vec![closed]);

        // inert branch: g^i has no fixed points
        let params = p53();
        let gs = build_gamma_set(&params);
        let fx = fixed_points(&params, ActionElement::g(1, 3), &gs).unwrap();
        assert!(fx.is_empty());

        // identity is rejected
        assert!(fixed_points(&params, ActionElement::identity(), &gs).is_err());
    }

    #[test]
    fn dihedral_relations() {
        for (p, q) in [(7u64, 3u64), (5, 3), (13, 3), (11, 5), (13, 7)] {
            let params = FieldParams::new(p, q).unwrap();
            let gs = build_gamma_set(&params);
            assert!(dihedral_check(&params, &gs).unwrap(), "({p},{q})");
        }
    }

    #[test]
    fn action_element_composition() {
        let params = p73();
        let gs = build_gamma_set(&params);
        let q = 3;
        let elems: Vec<ActionElement> = (0..q)
            .flat_map(|r| [ActionElement::g(r, q), ActionElement::fg(r, q)])
            .collect();
        for &a in &elems {
            for &b in &elems {
                let c = a.then(b, q);
                for &gamma in gs.elements() {
                    let step = b.apply(&params, a.apply(&params, gamma).unwrap()).unwrap();
                    assert_eq!(c.apply(&params, gamma).unwrap(), step);
                }
            }
        }
        // gf = fg^{-1}
        let gf = ActionElement::f().then(ActionElement::g(1, q), q);
        assert_eq!(gf, ActionElement::fg(q - 1, q));
    }

    #[test]
    fn orbit_of_half_has_q_elements() {
        for (p, q) in [(7u64, 3u64), (11, 3), (13, 3), (11, 5), (19, 5), (13, 7)] {
            let params = FieldParams::new(p, q).unwrap();
            let gs = build_gamma_set(&params);
            let fg = orbit_partition(&params, &gs, GeneratorSet::FG).unwrap();
            let orbit = fg.orbit_of(params.half()).unwrap();
            assert_eq!(orbit.len(), q as usize, "({p},{q})");
        }
    }
}
