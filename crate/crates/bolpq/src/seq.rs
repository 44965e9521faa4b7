//! Bi-infinite q-periodic sequences over F_{p^2}, stored as one period.
//!
//! A sequence u with u_0 = 1 yields a Bol loop of order pq exactly when it is
//! an eigenvector of the circulant matrix A (first row 0,1,0,…,0,1) and all
//! ratios u_i⁻¹u_k lie in F_p* ∖ {−1}.  The admissible sequences with
//! eigenvalue λ_1 are parametrized by γ ↦ γe_1 + (1−γ)e_{−1}, and the loop
//! construction consumes the entrywise inverse Θ = (u_i⁻¹).

use crate::error::{Error, Result};
use crate::field::{FieldParams, Fp2};

/// One period of a bi-infinite q-periodic sequence with u_0 = 1.
/// Indexing is over all integers and reduces mod q.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PeriodicSequence {
    entries: Vec<Fp2>,
}

impl PeriodicSequence {
    pub fn new(entries: Vec<Fp2>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("sequence must have positive period".into()));
        }
        if entries[0] != Fp2::ONE {
            return Err(Error::InvalidInput(format!(
                "sequence entry u_0 must be 1, got {}",
                entries[0]
            )));
        }
        Ok(PeriodicSequence { entries })
    }

    /// The all-ones sequence, the unique admissible sequence with eigenvalue 2.
    pub fn all_ones(q: u64) -> Self {
        PeriodicSequence { entries: vec![Fp2::ONE; q as usize] }
    }

    pub fn period(&self) -> usize {
        self.entries.len()
    }

    /// u_i for any integer index.
    pub fn entry(&self, i: i64) -> Fp2 {
        self.entries[i.rem_euclid(self.entries.len() as i64) as usize]
    }

    pub fn entries(&self) -> &[Fp2] {
        &self.entries
    }
}

/// Θ = (θ_i) with θ_0 = 1 and all entries nonzero; the entrywise inverse of
/// an admissible sequence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThetaVector {
    thetas: Vec<Fp2>,
}

impl ThetaVector {
    pub fn new(thetas: Vec<Fp2>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::InvalidInput("theta vector must be nonempty".into()));
        }
        if thetas[0] != Fp2::ONE {
            return Err(Error::InvalidInput(format!("theta_0 must be 1, got {}", thetas[0])));
        }
        if let Some(z) = thetas.iter().position(|x| x.is_zero()) {
            return Err(Error::InvalidInput(format!("theta_{z} is zero")));
        }
        Ok(ThetaVector { thetas })
    }

    /// Θ ≡ 1, which makes the loop construction collapse to Z_q × Z_p.
    pub fn all_ones(q: u64) -> Self {
        ThetaVector { thetas: vec![Fp2::ONE; q as usize] }
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn entry(&self, i: i64) -> Fp2 {
        self.thetas[i.rem_euclid(self.thetas.len() as i64) as usize]
    }

    pub fn thetas(&self) -> &[Fp2] {
        &self.thetas
    }
}

/// The eigenvalue λ_j = ω^j + ω^{−j} of the circulant A together with its
/// eigenvector e_j = (1, ω^j, ω^{2j}, …).
pub fn eigen_pair(params: &FieldParams, j: u64) -> (Fp2, PeriodicSequence) {
    let q = params.q() as i64;
    let j = (j as i64).rem_euclid(q);
    let lambda = params.add(params.omega_pow(j), params.omega_pow(-j));
    let entries = (0..q).map(|i| params.omega_pow(j * i)).collect();
    (lambda, PeriodicSequence { entries })
}

/// Multiply a length-q vector by the circulant matrix with first row
/// (0,1,0,…,0,1): result_i = v_{i−1} + v_{i+1}.
pub fn circulant_apply(params: &FieldParams, v: &[Fp2]) -> Vec<Fp2> {
    let q = v.len();
    (0..q)
        .map(|i| params.add(v[(i + q - 1) % q], v[(i + 1) % q]))
        .collect()
}

/// The sequence u(γ) = γe_j + (1−γ)e_{−j}, i.e. u_i = γω^{ji} + (1−γ)ω^{−ji}.
/// j = 0 gives the all-ones sequence for every γ.
pub fn u_from_gamma(params: &FieldParams, gamma: Fp2, j: u64) -> PeriodicSequence {
    let q = params.q() as i64;
    let j = (j as i64).rem_euclid(q);
    let co = params.sub(Fp2::ONE, gamma);
    let entries = (0..q)
        .map(|i| {
            params.add(
                params.mul(gamma, params.omega_pow(j * i)),
                params.mul(co, params.omega_pow(-j * i)),
            )
        })
        .collect();
    PeriodicSequence { entries }
}

/// True iff u_{n+2} = λ·u_{n+1} − u_n for all n mod q.
pub fn satisfies_recurrence(params: &FieldParams, u: &PeriodicSequence, lambda: Fp2) -> bool {
    let q = u.period() as i64;
    (0..q).all(|n| {
        u.entry(n + 2) == params.sub(params.mul(lambda, u.entry(n + 1)), u.entry(n))
    })
}

/// Membership test for the set of Bol sequences: all entries nonzero, every
/// ratio u_i⁻¹u_k in F_p* ∖ {−1}, and u an eigenvector of the circulant for
/// one of the q eigenvalues λ_j (tried exhaustively; q is tiny).
pub fn is_bol_sequence(params: &FieldParams, u: &PeriodicSequence) -> bool {
    if u.period() != params.q() as usize {
        return false;
    }
    if u.entries().iter().any(Fp2::is_zero) {
        return false;
    }
    let minus_one = params.minus_one();
    for ui in u.entries() {
        let inv = params.inv(*ui).expect("entries checked nonzero");
        for uk in u.entries() {
            let ratio = params.mul(inv, *uk);
            if !ratio.in_prime_field() || ratio.is_zero() || ratio == minus_one {
                return false;
            }
        }
    }
    (0..params.q()).any(|j| {
        let (lambda, _) = eigen_pair(params, j);
        satisfies_recurrence(params, u, lambda)
    })
}

/// True iff u_i = u_{−i} for all i; among Bol sequences this characterizes
/// the ones whose loop is a Bruck loop.
pub fn is_bruck_sequence(u: &PeriodicSequence) -> bool {
    let q = u.period() as i64;
    (0..q).all(|i| u.entry(i) == u.entry(-i))
}

/// Θ(γ) with θ_i = 1 / (γω^i + (1−γ)ω^{−i}), the entrywise inverse of
/// u(γ) at j = 1.
pub fn theta_from_gamma(params: &FieldParams, gamma: Fp2) -> Result<ThetaVector> {
    let u = u_from_gamma(params, gamma, 1);
    let mut thetas = Vec::with_capacity(u.period());
    for &ui in u.entries() {
        if ui.is_zero() {
            return Err(Error::DegenerateGamma { gamma });
        }
        thetas.push(params.inv(ui)?);
    }
    Ok(ThetaVector { thetas })
}

/// The reindexed-and-rescaled sequence v_i = u_r⁻¹ · u_{si+r}.
///
/// These transforms realize the isomorphism (r = 0), companion (s = 1) and
/// isotopism relations between admissible sequences.
pub fn transform_seq(
    params: &FieldParams,
    u: &PeriodicSequence,
    s: u64,
    r: u64,
) -> Result<PeriodicSequence> {
    let q = u.period() as i64;
    if (s as i64).rem_euclid(q) == 0 {
        return Err(Error::InvalidInput(format!("s = {s} must be nonzero mod {q}")));
    }
    let ur = u.entry(r as i64);
    if ur.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let ur_inv = params.inv(ur)?;
    let entries = (0..q)
        .map(|i| params.mul(ur_inv, u.entry(s as i64 * i + r as i64)))
        .collect();
    Ok(PeriodicSequence { entries })
}

/// Which of the three sequence relations to search for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessMode {
    /// u_i = v_{si}: loop isomorphism (r fixed to 0).
    Isomorphism,
    /// u_i = v_r⁻¹ v_{i+r}: companion relation (s fixed to 1).
    Companion,
    /// u_i = v_r⁻¹ v_{si+r}: loop isotopism.
    Isotopism,
}

/// Exhaustive search for the lexicographically least (s, r) with
/// transform_seq(v, s, r) = u, restricted according to the mode.
pub fn find_isotopy_witness(
    params: &FieldParams,
    u: &PeriodicSequence,
    v: &PeriodicSequence,
    mode: WitnessMode,
) -> Option<(u64, u64)> {
    let q = params.q();
    if u.period() != q as usize || v.period() != q as usize {
        return None;
    }
    let s_range: Vec<u64> = match mode {
        WitnessMode::Companion => vec![1],
        _ => (1..q).collect(),
    };
    let r_range: Vec<u64> = match mode {
        WitnessMode::Isomorphism => vec![0],
        _ => (0..q).collect(),
    };
    for &s in &s_range {
        for &r in &r_range {
            if v.entry(r as i64).is_zero() {
                continue;
            }
            match transform_seq(params, v, s, r) {
                Ok(w) if w == *u => return Some((s, r)),
                _ => {}
            }
        }
    }
    None
}
