//! Explicit Cayley tables on F_q × F_p and exhaustive identity checking.
//!
//! The constructed tables multiply by
//!
//!   (i,j)(k,ℓ) = (i+k, ℓ(1+θ_k)⁻¹ + (j + ℓ(1+θ_k)⁻¹)·θ_i⁻¹θ_{i+k})
//!
//! with the first coordinate mod q and the second mod p.  The element (0,0)
//! is always a two-sided identity.  Property checkers (`is_latin`, `is_bol`,
//! …) run over arbitrary square tables, constructed or imported.

use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{FieldParams, Fp2};
use crate::seq::ThetaVector;

/// Hard cap on the table order.  The O(n³) identity scans are the binding
/// constraint; 3000 keeps a single Bol check in the tens of seconds.
pub const MAX_ORDER: usize = 3000;

/// Where a constructed table came from.
#[derive(Clone, Debug)]
pub struct Provenance {
    pub p: u64,
    pub q: u64,
    pub gamma: Option<Fp2>,
    pub theta: Vec<Fp2>,
}

/// A dense n×n multiplication table over element indices 0..n with a
/// designated identity index (0 for constructed and imported tables).
#[derive(Clone, Debug)]
pub struct LoopTable {
    n: usize,
    table: Vec<u32>,
    identity: usize,
    provenance: Option<Provenance>,
}

/// Equality is on the mathematical content (order, entries, identity);
/// provenance is bookkeeping and deliberately ignored.
impl PartialEq for LoopTable {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.identity == other.identity && self.table == other.table
    }
}
impl Eq for LoopTable {}

impl LoopTable {
    /// Wrap a raw table; entries are range-checked, nothing else is assumed.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("table order must be positive".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::ResourceLimit(format!(
                "table order {n} exceeds the maximum {MAX_ORDER}"
            )));
        }
        let mut table = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "row {r} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidInput(format!(
                        "entry {v} out of range in row {r}"
                    )));
                }
                table.push(v as u32);
            }
        }
        Ok(LoopTable { n, table, identity: 0, provenance: None })
    }

    /// Evaluate the multiplication formula for a full Θ vector.  The carrier
    /// F_q × F_p is flattened as (i, j) ↦ i·p + j, so (0,0) ↦ 0 is the
    /// identity.
    ///
    /// The second coordinate is computed in F_{p^2}; if any coefficient picks
    /// up a √t-component the Θ input violated the prime-field hypothesis and
    /// the construction is refused rather than silently truncated.
    pub fn build_loop(params: &FieldParams, theta: &ThetaVector) -> Result<Self> {
        let p = params.p() as usize;
        let q = params.q() as usize;
        if theta.len() != q {
            return Err(Error::InvalidInput(format!(
                "theta has {} entries, expected q = {q}",
                theta.len()
            )));
        }
        let n = p * q;
        if n > MAX_ORDER {
            return Err(Error::ResourceLimit(format!(
                "order pq = {n} exceeds the maximum {MAX_ORDER}"
            )));
        }

        let mut inv_theta = Vec::with_capacity(q);
        for i in 0..q {
            let th = theta.entry(i as i64);
            if th.is_zero() {
                return Err(Error::InadmissibleTheta(format!("theta_{i} is zero")));
            }
            inv_theta.push(params.inv(th)?);
        }
        let mut c1 = Vec::with_capacity(q);
        for k in 0..q {
            let d = params.add(Fp2::ONE, theta.entry(k as i64));
            if d.is_zero() {
                return Err(Error::InadmissibleTheta(format!("1 + theta_{k} is zero")));
            }
            c1.push(params.inv(d)?);
        }

        // entry(j, l) at block (i, k) is l*a + j*b with
        //   b = theta_i^{-1} theta_{i+k},  a = (1+theta_k)^{-1} (1 + b);
        // both must land in F_p.
        let mut coeff = vec![(0u64, 0u64); q * q];
        for i in 0..q {
            for k in 0..q {
                let b = params.mul(inv_theta[i], theta.entry((i + k) as i64));
                let a = params.mul(c1[k], params.add(Fp2::ONE, b));
                if !a.in_prime_field() || !b.in_prime_field() {
                    return Err(Error::InadmissibleTheta(format!(
                        "second coordinate leaves the prime field at (i,k) = ({i},{k})"
                    )));
                }
                coeff[i * q + k] = (a.re, b.re);
            }
        }

        let mut table = vec![0u32; n * n];
        for i in 0..q {
            for k in 0..q {
                let (a, b) = coeff[i * q + k];
                let out_block = ((i + k) % q) * p;
                for j in 0..p {
                    let jb = j as u64 * b % p as u64;
                    let row = (i * p + j) * n + k * p;
                    for l in 0..p {
                        let second = (l as u64 * a + jb) % p as u64;
                        table[row + l] = (out_block + second as usize) as u32;
                    }
                }
            }
        }
        Ok(LoopTable {
            n,
            table,
            identity: 0,
            provenance: Some(Provenance {
                p: params.p(),
                q: params.q(),
                gamma: None,
                theta: theta.thetas().to_vec(),
            }),
        })
    }

    /// Table of Z_q × Z_p ≅ Z_pq, the Θ ≡ 1 specialization.  Available
    /// without field parameters so the q ∤ p²−1 case can still be tabulated.
    pub fn cyclic(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidInput("orders must be positive".into()));
        }
        let (p, q) = (p as usize, q as usize);
        let n = p * q;
        if n > MAX_ORDER {
            return Err(Error::ResourceLimit(format!(
                "order pq = {n} exceeds the maximum {MAX_ORDER}"
            )));
        }
        let mut table = vec![0u32; n * n];
        for i in 0..q {
            for j in 0..p {
                for k in 0..q {
                    for l in 0..p {
                        table[(i * p + j) * n + (k * p + l)] =
                            (((i + k) % q) * p + (j + l) % p) as u32;
                    }
                }
            }
        }
        Ok(LoopTable { n, table, identity: 0, provenance: None })
    }

    /// Convenience: the loop of the parameter γ, via Θ(γ).
    pub fn from_gamma(params: &FieldParams, gamma: Fp2) -> Result<Self> {
        let theta = crate::seq::theta_from_gamma(params, gamma)?;
        let mut t = Self::build_loop(params, &theta)?;
        if let Some(prov) = t.provenance.as_mut() {
            prov.gamma = Some(gamma);
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// The product of elements x and y (row x, column y).
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y] as usize
    }

    pub(crate) fn with_identity(n: usize, table: Vec<u32>, identity: usize) -> Self {
        LoopTable { n, table, identity, provenance: None }
    }

    /// Every row and every column is a permutation of 0..n.
    pub fn is_latin(&self) -> bool {
        let n = self.n;
        let mut seen = vec![false; n];
        for x in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for y in 0..n {
                let v = self.get(x, y);
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        for y in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for x in 0..n {
                let v = self.get(x, y);
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        true
    }

    /// True iff the designated identity is two-sided.
    pub fn has_identity(&self) -> bool {
        let e = self.identity;
        (0..self.n).all(|x| self.get(e, x) == x && self.get(x, e) == x)
    }

    /// Exhaustive check of the right Bol identity ((zx)y)x = z((xy)x).
    pub fn is_bol(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                let xy_x = self.get(self.get(x, y), x);
                for z in 0..n {
                    let lhs = self.get(self.get(self.get(z, x), y), x);
                    if lhs != self.get(z, xy_x) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The two-sided inverse of x, if the right inverse is also a left
    /// inverse.
    pub fn element_inverse(&self, x: usize) -> Option<usize> {
        let e = self.identity;
        let y = (0..self.n).find(|&y| self.get(x, y) == e)?;
        (self.get(y, x) == e).then_some(y)
    }

    /// Bol plus the automorphic inverse property (xy)⁻¹ = x⁻¹y⁻¹.  Refuses
    /// (returns false) when the designated identity is not two-sided or some
    /// inverse is one-sided.
    pub fn is_bruck(&self) -> bool {
        if !self.has_identity() || !self.is_bol() {
            return false;
        }
        let n = self.n;
        let mut inv = Vec::with_capacity(n);
        for x in 0..n {
            match self.element_inverse(x) {
                Some(y) => inv.push(y),
                None => return false,
            }
        }
        for x in 0..n {
            for y in 0..n {
                if inv[self.get(x, y)] != self.get(inv[x], inv[y]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_associative(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                let xy = self.get(x, y);
                for z in 0..n {
                    if self.get(xy, z) != self.get(x, self.get(y, z)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in (x + 1)..n {
                if self.get(x, y) != self.get(y, x) {
                    return false;
                }
            }
        }
        true
    }

    /// Length of the cycle of the identity under right translation by x,
    /// i.e. the least k ≥ 1 with x^[k] = e along the chain x, x·x, (x·x)·x, …
    /// Returns 0 if the chain never returns to the identity (possible only
    /// for non-latin tables).
    pub fn left_power_order(&self, x: usize) -> usize {
        let e = self.identity;
        let mut c = e;
        for k in 1..=self.n {
            c = self.get(c, x);
            if c == e {
                return k;
            }
        }
        0
    }

    /// Serialize in the shared text format: first line n, then n rows of n
    /// whitespace-separated indices.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                if y > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{}", self.get(x, y));
            }
            out.push('\n');
        }
        out
    }

    /// Parse the text format.  Blank lines are ignored; anything else beyond
    /// the declared n rows is an error.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut rows: Vec<Vec<usize>> = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            match n {
                None => {
                    let parsed = text.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("expected table order, got {text:?}"),
                    })?;
                    if parsed == 0 {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: "table order must be positive".into(),
                        });
                    }
                    if parsed > MAX_ORDER {
                        return Err(Error::ResourceLimit(format!(
                            "table order {parsed} exceeds the maximum {MAX_ORDER}"
                        )));
                    }
                    n = Some(parsed);
                }
                Some(n) => {
                    if rows.len() == n {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("unexpected content after {n} rows"),
                        });
                    }
                    let mut row = Vec::with_capacity(n);
                    for tok in text.split_whitespace() {
                        let v = tok.parse::<usize>().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("expected an index, got {tok:?}"),
                        })?;
                        if v >= n {
                            return Err(Error::Parse {
                                line: lineno,
                                msg: format!("entry {v} out of range 0..{n}"),
                            });
                        }
                        row.push(v);
                    }
                    if row.len() != n {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("row has {} entries, expected {n}", row.len()),
                        });
                    }
                    rows.push(row);
                }
            }
        }
        let n = n.ok_or(Error::Parse { line: 1, msg: "empty table file".into() })?;
        if rows.len() != n {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {n} rows, found {}", rows.len()),
            });
        }
        Self::from_rows(rows)
    }

    pub fn write_file<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::parse(std::io::BufReader::new(file))
    }
}
