//! Exact arithmetic in F_p and its quadratic extension F_{p^2} = F_p(√t),
//! together with the deterministic choice of the non-square t and of a
//! primitive q-th root of unity ω.
//!
//! Elements of F_{p^2} are stored as `re + im·√t` with both components
//! reduced mod p.  F_p embeds as `im = 0`; there is no separate prime-field
//! element type.

use std::fmt;

use crate::error::{Error, Result};

/// Upper bound (exclusive) on p.  With p < 2^31 every product of two reduced
/// residues fits in a u64 without overflow.
pub const MAX_PRIME: u64 = 1 << 31;

/// An element `re + im·√t` of F_{p^2}, components reduced mod p.
///
/// The derived `Ord` is lexicographic on (re, im) integer representatives and
/// is the canonical total order used for orbit representatives and sorted
/// output everywhere in the crate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Fp2 {
    pub re: u64,
    pub im: u64,
}

impl Fp2 {
    pub const ZERO: Fp2 = Fp2 { re: 0, im: 0 };
    pub const ONE: Fp2 = Fp2 { re: 1, im: 0 };

    /// Embed a reduced F_p residue.
    pub const fn real(re: u64) -> Fp2 {
        Fp2 { re, im: 0 }
    }

    pub const fn new(re: u64, im: u64) -> Fp2 {
        Fp2 { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// True iff the element lies in the prime field F_p.
    pub fn in_prime_field(&self) -> bool {
        self.im == 0
    }
}

impl fmt::Display for Fp2 {
    /// Canonical form used in reports: `a`, `b*w` or `a+b*w` with w = √t.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else if self.re == 0 {
            write!(f, "{}*w", self.im)
        } else {
            write!(f, "{}+{}*w", self.re, self.im)
        }
    }
}

impl serde::Serialize for Fp2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Which of p−1, p+1 the prime q divides.  For odd q at most one holds.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Branch {
    QDividesPMinus1,
    QDividesPPlus1,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::QDividesPMinus1 => write!(f, "q|p-1"),
            Branch::QDividesPPlus1 => write!(f, "q|p+1"),
        }
    }
}

impl serde::Serialize for Branch {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn is_odd_prime(n: u64) -> bool {
    if n < 3 || n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

fn fp2_mul(a: Fp2, b: Fp2, p: u64, t: u64) -> Fp2 {
    // (a + b√t)(c + d√t) = (ac + bdt) + (ad + bc)√t
    Fp2 {
        re: addm(mulm(a.re, b.re, p), mulm(mulm(a.im, b.im, p), t, p), p),
        im: addm(mulm(a.re, b.im, p), mulm(a.im, b.re, p), p),
    }
}

fn fp2_pow(a: Fp2, mut e: u64, p: u64, t: u64) -> Fp2 {
    let mut r = Fp2::ONE;
    let mut base = a;
    while e > 0 {
        if e & 1 == 1 {
            r = fp2_mul(r, base, p, t);
        }
        base = fp2_mul(base, base, p, t);
        e >>= 1;
    }
    r
}

/// Smallest non-square t ≥ 2 modulo p, found by the Euler criterion
/// t^((p−1)/2) ≡ −1.
pub fn find_nonsquare(p: u64) -> Result<u64> {
    if !is_odd_prime(p) {
        return Err(Error::InvalidInput(format!("p = {p} is not an odd prime")));
    }
    if p >= MAX_PRIME {
        return Err(Error::InvalidInput(format!("p = {p} exceeds the 2^31 bound")));
    }
    for t in 2..p {
        if powm(t, (p - 1) / 2, p) == p - 1 {
            return Ok(t);
        }
    }
    // every odd prime has a non-square
    unreachable!("no non-square found mod {p}")
}

/// Deterministic primitive q-th root of unity in F_{p^2}.
///
/// If q | p−1 the root lies in F_p and is β^((p−1)/q) for the smallest base
/// β = 2, 3, … that gives a value ≠ 1.  If q | p+1 the root is
/// (a+√t)^((p²−1)/q) for the smallest a = 1, 2, … that gives a value ≠ 1.
/// Since q is prime, any q-th root of unity ≠ 1 is primitive.
pub fn find_primitive_qth_root(p: u64, q: u64, t: u64) -> Result<Fp2> {
    if !is_odd_prime(p) || !is_odd_prime(q) || q >= p || p >= MAX_PRIME {
        return Err(Error::InvalidInput(format!(
            "need odd primes q < p < 2^31, got p = {p}, q = {q}"
        )));
    }
    if t == 0 || t >= p || powm(t, (p - 1) / 2, p) != p - 1 {
        return Err(Error::InvalidInput(format!("t = {t} is not a non-square mod {p}")));
    }
    if (p - 1) % q == 0 {
        for beta in 2..p {
            let w = powm(beta, (p - 1) / q, p);
            if w != 1 {
                return Ok(Fp2::real(w));
            }
        }
        unreachable!("no primitive root found in F_{p}");
    }
    if (p + 1) % q == 0 {
        let e = (p * p - 1) / q;
        for a in 1..p {
            let w = fp2_pow(Fp2::new(a, 1), e, p, t);
            if w != Fp2::ONE {
                return Ok(w);
            }
        }
        unreachable!("no primitive root found in F_{p}^2");
    }
    Err(Error::NoPrimitiveRoot { p, q })
}

/// The ambient arithmetic context: the primes p > q, the canonical
/// non-square t, the canonical primitive q-th root of unity ω with its q
/// cached powers, and the divisibility branch.
///
/// Immutable after construction; every operation is a pure function, so a
/// `FieldParams` can be shared freely between threads.
#[derive(Clone, Debug)]
pub struct FieldParams {
    p: u64,
    q: u64,
    t: u64,
    omega: Fp2,
    omega_powers: Vec<Fp2>,
    branch: Branch,
}

impl FieldParams {
    /// Fails with [`Error::NoPrimitiveRoot`] when q ∤ p²−1 (only the cyclic
    /// loop of order pq exists in that case).
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidInput(format!("p = {p} is not an odd prime")));
        }
        if !is_odd_prime(q) {
            return Err(Error::InvalidInput(format!("q = {q} is not an odd prime")));
        }
        if q >= p {
            return Err(Error::InvalidInput(format!("q = {q} must be smaller than p = {p}")));
        }
        if p >= MAX_PRIME {
            return Err(Error::InvalidInput(format!("p = {p} exceeds the 2^31 bound")));
        }
        let t = find_nonsquare(p)?;
        let omega = find_primitive_qth_root(p, q, t)?;
        let branch = if (p - 1) % q == 0 {
            Branch::QDividesPMinus1
        } else {
            Branch::QDividesPPlus1
        };
        let mut omega_powers = Vec::with_capacity(q as usize);
        let mut w = Fp2::ONE;
        for _ in 0..q {
            omega_powers.push(w);
            w = fp2_mul(w, omega, p, t);
        }
        debug_assert_eq!(w, Fp2::ONE, "omega^q must be 1");
        Ok(FieldParams { p, q, t, omega, omega_powers, branch })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn omega(&self) -> Fp2 {
        self.omega
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// ω^0 .. ω^(q−1) in order.
    pub fn omega_powers(&self) -> &[Fp2] {
        &self.omega_powers
    }

    /// ω^i for any integer exponent, reduced mod q.
    pub fn omega_pow(&self, i: i64) -> Fp2 {
        self.omega_powers[i.rem_euclid(self.q as i64) as usize]
    }

    /// True iff x is one of the q powers of ω.
    pub fn omega_subgroup_contains(&self, x: Fp2) -> bool {
        self.omega_powers.contains(&x)
    }

    /// Reduce arbitrary integer coordinates into the field.
    pub fn elem(&self, re: i64, im: i64) -> Fp2 {
        let p = self.p as i64;
        Fp2::new(re.rem_euclid(p) as u64, im.rem_euclid(p) as u64)
    }

    /// The element 1/2 (p is odd, so 2 is invertible).
    pub fn half(&self) -> Fp2 {
        Fp2::real((self.p + 1) / 2)
    }

    pub fn minus_one(&self) -> Fp2 {
        Fp2::real(self.p - 1)
    }

    pub fn add(&self, a: Fp2, b: Fp2) -> Fp2 {
        Fp2 {
            re: addm(a.re, b.re, self.p),
            im: addm(a.im, b.im, self.p),
        }
    }

    pub fn sub(&self, a: Fp2, b: Fp2) -> Fp2 {
        Fp2 {
            re: subm(a.re, b.re, self.p),
            im: subm(a.im, b.im, self.p),
        }
    }

    pub fn neg(&self, a: Fp2) -> Fp2 {
        self.sub(Fp2::ZERO, a)
    }

    pub fn mul(&self, a: Fp2, b: Fp2) -> Fp2 {
        fp2_mul(a, b, self.p, self.t)
    }

    /// Multiplicative inverse via the norm a² − b²t, which vanishes only at 0
    /// because t is a non-square.
    pub fn inv(&self, a: Fp2) -> Result<Fp2> {
        let p = self.p;
        let norm = subm(mulm(a.re, a.re, p), mulm(mulm(a.im, a.im, p), self.t, p), p);
        if norm == 0 {
            return Err(Error::DivisionByZero);
        }
        let ninv = powm(norm, p - 2, p);
        Ok(Fp2 {
            re: mulm(a.re, ninv, p),
            im: mulm(subm(0, a.im, p), ninv, p),
        })
    }

    pub fn pow(&self, a: Fp2, e: u64) -> Fp2 {
        fp2_pow(a, e, self.p, self.t)
    }

    pub fn fp_add(&self, a: u64, b: u64) -> u64 {
        addm(a, b, self.p)
    }

    pub fn fp_sub(&self, a: u64, b: u64) -> u64 {
        subm(a, b, self.p)
    }

    pub fn fp_mul(&self, a: u64, b: u64) -> u64 {
        mulm(a, b, self.p)
    }

    pub fn fp_inv(&self, a: u64) -> Result<u64> {
        if a % self.p == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(powm(a, self.p - 2, self.p))
    }
}
