//! Towers of finite fields `F_p ⊆ F_q = F_{p^h} ⊆ F_{q^k} ⊆ F_{q^n}`.
//!
//! The whole tower lives inside a single quotient `F_p[x]/(f)` with
//! `deg f = h·n`; every intermediate field is recovered as the fixed set of
//! the appropriate Frobenius power.  Elements are dense indices into
//! precomputed arithmetic tables, so a [`FieldCtx`] supports fields of at
//! most 256 elements — comfortably above every desk-scale parameter set the
//! verification harness uses.
//!
//! Element encoding: the element with coefficients `c_0 + c_1 x + … +
//! c_{d-1} x^{d-1}` has index `Σ c_i p^{d-1-i}`, i.e. the *constant*
//! coefficient is the most significant digit.  Consequently the natural
//! order on indices coincides with the lexicographic order on coefficient
//! tuples `(c_0, …, c_{d-1})`, which is the element order used everywhere
//! for canonical representatives.  Index `1` is the monomial `x^{d-1}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A field element, as an index into the tables of its [`FieldCtx`].
pub type Elt = u16;

/// Immutable context for one field tower.
///
/// All arithmetic goes through lookup tables built at construction time.
/// Levels are indexed by the divisors `e | n`: level `e` is the subfield
/// `F_{q^e}` of size `q^e`.
pub struct FieldCtx {
    p: u16,
    h: u8,
    n: u8,
    d: u8,
    q: u16,
    size: usize,
    irr: Vec<u16>,
    add_t: Vec<Elt>,
    mul_t: Vec<Elt>,
    neg_t: Vec<Elt>,
    inv_t: Vec<Elt>,
    /// `frob_q[e][x] = x^{q^e}` for `e` in `0..n`.
    frob_q: Vec<Vec<Elt>>,
    levels: Vec<u8>,
    sub_deg: Vec<u8>,
    sub_elems: BTreeMap<u8, Vec<Elt>>,
    min_nz: BTreeMap<u8, Elt>,
    beta: Elt,
    beta_pows: Vec<Elt>,
    q_coords_t: Vec<Vec<Elt>>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldCtx(p={}, h={}, n={})", self.p, self.h, self.n)
    }
}

fn is_prime(p: u16) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Dense polynomial arithmetic over `F_p`, used only while building tables.
mod poly {
    /// Coefficient vectors, index `i` = coefficient of `x^i`, trimmed.
    pub fn trim(mut a: Vec<u16>) -> Vec<u16> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn add(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
        let mut out = vec![0u16; a.len().max(b.len())];
        for (i, &x) in a.iter().enumerate() {
            out[i] = (out[i] + x) % p;
        }
        for (i, &x) in b.iter().enumerate() {
            out[i] = (out[i] + x) % p;
        }
        trim(out)
    }

    pub fn mul(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u16; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem(a: &[u16], m: &[u16], p: u16) -> Vec<u16> {
        let mut a = trim(a.to_vec());
        let dm = m.len() - 1;
        while a.len() > dm {
            let c = *a.last().unwrap();
            if c != 0 {
                let shift = a.len() - 1 - dm;
                for (i, &y) in m.iter().enumerate() {
                    let v = (c * y) % p;
                    a[shift + i] = (a[shift + i] + p * p - v) % p;
                }
            }
            a = trim(a);
            if a.len() <= dm {
                break;
            }
        }
        a
    }

    pub fn pow_mod(x: &[u16], mut e: u128, m: &[u16], p: u16) -> Vec<u16> {
        let mut base = rem(x, m, p);
        let mut acc = vec![1u16];
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &base, p), m, p);
            }
            base = rem(&mul(&base, &base, p), m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            // reduce a mod b (b not necessarily monic: scale it)
            let inv_lead = mod_inv(*b.last().unwrap(), p);
            let monic_b: Vec<u16> = b.iter().map(|&c| (c * inv_lead) % p).collect();
            let r = rem(&a, &monic_b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn mod_inv(x: u16, p: u16) -> u16 {
        // p prime and small: Fermat
        let mut acc: u32 = 1;
        let mut base = x as u32 % p as u32;
        let mut e = p as u32 - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u32;
            }
            base = base * base % p as u32;
            e >>= 1;
        }
        acc as u16
    }
}

fn prime_divisors(mut m: u32) -> Vec<u32> {
    let mut out = vec![];
    let mut k = 2;
    while k * k <= m {
        if m % k == 0 {
            out.push(k);
            while m % k == 0 {
                m /= k;
            }
        }
        k += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Monic irreducibility test for `x^d + Σ c_i x^i` given by low coefficients.
fn poly_is_irreducible(low: &[u16], p: u16) -> bool {
    let d = low.len();
    let mut f = low.to_vec();
    f.push(1);
    let x = vec![0u16, 1];
    // x^{p^d} == x (mod f)
    let xpd = poly::pow_mod(&x, (p as u128).pow(d as u32), &f, p);
    if xpd != poly::trim(x.clone()) {
        return false;
    }
    // gcd(x^{p^{d/r}} - x, f) == 1 for every prime r | d
    for r in prime_divisors(d as u32) {
        let mut t = poly::pow_mod(&x, (p as u128).pow(d as u32 / r), &f, p);
        if t.len() < 2 {
            t.resize(2, 0);
        }
        t[1] = (t[1] + p - 1) % p;
        let g = poly::gcd(&f, &poly::trim(t), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn divisors(n: u8) -> Vec<u8> {
    (1..=n).filter(|e| n % e == 0).collect()
}

impl FieldCtx {
    /// Builds the tower with the default modulus: the lexicographically
    /// smallest monic irreducible of degree `h·n` over `F_p`, comparing
    /// coefficient tuples `(c_0, …, c_{d-1})` with `c_0` most significant.
    pub fn new(p: u16, h: u8, n: u8) -> Result<FieldCtx> {
        Self::validate_shape(p, h, n)?;
        let d = h * n;
        let size = (p as usize).pow(d as u32);
        // ascending index order IS lex order on (c_0, ..., c_{d-1})
        for idx in 0..size {
            let low = Self::index_to_poly_static(idx, p, d);
            if poly_is_irreducible(&low, p) {
                return Self::with_irreducible(p, h, n, &low);
            }
        }
        Err(Error::InvalidFieldSpec(format!(
            "no irreducible of degree {d} over F_{p} found"
        )))
    }

    /// Builds the tower over a caller-supplied monic irreducible modulus,
    /// given by its `h·n` low coefficients `[c_0, …, c_{d-1}]` (ascending
    /// powers, leading coefficient 1 implied).
    pub fn with_irreducible(p: u16, h: u8, n: u8, low: &[u16]) -> Result<FieldCtx> {
        Self::validate_shape(p, h, n)?;
        let d = h * n;
        let size = (p as usize).pow(d as u32);
        if low.len() != d as usize {
            return Err(Error::InvalidFieldSpec(format!(
                "modulus must list {} coefficients, got {}",
                d,
                low.len()
            )));
        }
        if low.iter().any(|&c| c >= p) {
            return Err(Error::InvalidFieldSpec(
                "modulus coefficients must be reduced mod p".into(),
            ));
        }
        if !poly_is_irreducible(low, p) {
            return Err(Error::InvalidFieldSpec(format!(
                "modulus {low:?} (low coefficients) is reducible over F_{p}"
            )));
        }

        let q = (p as u32).pow(h as u32) as u16;
        let mut f = low.to_vec();
        f.push(1);

        let to_poly = |x: usize| Self::index_to_poly_static(x, p, d);
        let from_poly = |a: &[u16]| -> usize {
            let mut v = 0usize;
            for i in 0..d as usize {
                let c = a.get(i).copied().unwrap_or(0) as usize;
                v += c * (p as usize).pow((d as usize - 1 - i) as u32);
            }
            v
        };

        let mut add_t = vec![0 as Elt; size * size];
        let mut mul_t = vec![0 as Elt; size * size];
        let mut neg_t = vec![0 as Elt; size];
        for x in 0..size {
            let px = to_poly(x);
            let negp: Vec<u16> = px.iter().map(|&c| (p - c) % p).collect();
            neg_t[x] = from_poly(&negp) as Elt;
            for y in 0..=x {
                let py = to_poly(y);
                let s = from_poly(&poly::add(&px, &py, p)) as Elt;
                let m = from_poly(&poly::rem(&poly::mul(&px, &py, p), &f, p)) as Elt;
                add_t[x * size + y] = s;
                add_t[y * size + x] = s;
                mul_t[x * size + y] = m;
                mul_t[y * size + x] = m;
            }
        }

        let mut ctx = FieldCtx {
            p,
            h,
            n,
            d,
            q,
            size,
            irr: low.to_vec(),
            add_t,
            mul_t,
            neg_t,
            inv_t: vec![0; size],
            frob_q: vec![],
            levels: divisors(n),
            sub_deg: vec![0; size],
            sub_elems: BTreeMap::new(),
            min_nz: BTreeMap::new(),
            beta: 0,
            beta_pows: vec![],
            q_coords_t: vec![],
        };

        for x in 1..size {
            ctx.inv_t[x] = ctx.pow(x as Elt, (size - 2) as u64);
        }

        // Frobenius tables: x -> x^{q^e}
        let mut frob1 = vec![0 as Elt; size];
        for x in 0..size {
            frob1[x] = ctx.pow(x as Elt, q as u64);
        }
        let mut frob_q = vec![(0..size as Elt).collect::<Vec<_>>()];
        for _ in 1..n {
            let prev = frob_q.last().unwrap();
            frob_q.push(prev.iter().map(|&y| frob1[y as usize]).collect());
        }
        ctx.frob_q = frob_q;

        // subfield degree: the minimal divisor e of n with x^{q^e} = x
        for x in 0..size {
            let deg = ctx
                .levels
                .iter()
                .copied()
                .find(|&e| ctx.frob_apply(x as Elt, e) == x as Elt)
                .unwrap_or(n);
            ctx.sub_deg[x] = deg;
        }
        for &e in &ctx.levels.clone() {
            let elems: Vec<Elt> = (0..size as Elt)
                .filter(|&x| e % ctx.sub_deg[x as usize] == 0)
                .collect();
            let expected = (q as usize).pow(e as u32);
            if elems.len() != expected {
                return Err(Error::InvalidFieldSpec(format!(
                    "subfield level {e} has {} elements, expected {expected}",
                    elems.len()
                )));
            }
            ctx.min_nz.insert(e, elems[1]);
            ctx.sub_elems.insert(e, elems);
        }

        // q-expansion basis: beta = least element of degree exactly n
        let beta = (1..size as Elt)
            .find(|&x| ctx.sub_deg[x as usize] == n)
            .ok_or_else(|| Error::InvalidFieldSpec("no generator of full degree".into()))?;
        ctx.beta = beta;
        let mut beta_pows = vec![ctx.one()];
        for _ in 1..n {
            let last = *beta_pows.last().unwrap();
            beta_pows.push(ctx.mul(last, beta));
        }
        ctx.beta_pows = beta_pows;

        let mut q_coords_t = vec![vec![]; size];
        let fq = ctx.sub_elems[&1].clone();
        let mut tuple = vec![0usize; n as usize];
        let mut filled = 0usize;
        loop {
            let mut v = 0 as Elt;
            for i in 0..n as usize {
                v = ctx.add(v, ctx.mul(fq[tuple[i]], ctx.beta_pows[i]));
            }
            if !q_coords_t[v as usize].is_empty() {
                return Err(Error::InvalidFieldSpec(
                    "expansion basis is not independent".into(),
                ));
            }
            q_coords_t[v as usize] = tuple.iter().map(|&ci| fq[ci]).collect();
            filled += 1;
            // advance the tuple odometer
            let mut i = 0;
            while i < n as usize {
                tuple[i] += 1;
                if tuple[i] < fq.len() {
                    break;
                }
                tuple[i] = 0;
                i += 1;
            }
            if i == n as usize {
                break;
            }
        }
        if filled != size {
            return Err(Error::InvalidFieldSpec(
                "expansion basis does not span the field".into(),
            ));
        }
        ctx.q_coords_t = q_coords_t;
        Ok(ctx)
    }

    fn validate_shape(p: u16, h: u8, n: u8) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::InvalidFieldSpec(format!("p = {p} is not prime")));
        }
        if h == 0 {
            return Err(Error::InvalidFieldSpec("h must be at least 1".into()));
        }
        if n < 2 {
            return Err(Error::InvalidFieldSpec("n must be at least 2".into()));
        }
        let d = (h as u32) * (n as u32);
        if d > 16 {
            return Err(Error::InvalidFieldSpec(format!("degree h*n = {d} too large")));
        }
        let size = (p as f64).powi(d as i32);
        if size > 256.0 {
            return Err(Error::InvalidFieldSpec(format!(
                "field size p^(h*n) = {p}^{d} exceeds 256"
            )));
        }
        Ok(())
    }

    fn index_to_poly_static(x: usize, p: u16, d: u8) -> Vec<u16> {
        // digits little-endian of x are c_{d-1}, c_{d-2}, …, c_0
        let mut digs = vec![0u16; d as usize];
        let mut v = x;
        for j in 0..d as usize {
            digs[d as usize - 1 - j] = (v % p as usize) as u16;
            v /= p as usize;
        }
        digs
    }

    // ----------------------------------------------------------- accessors

    /// Characteristic `p`.
    pub fn p(&self) -> u16 {
        self.p
    }

    /// Degree of the base field `F_q = F_{p^h}` over the prime field.
    pub fn h(&self) -> u8 {
        self.h
    }

    /// Degree of the top field over `F_q`.
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Total degree `d = h·n` over the prime field.
    pub fn d(&self) -> u8 {
        self.d
    }

    /// Size `q` of the base field.
    pub fn q(&self) -> u16 {
        self.q
    }

    /// Size `q^n` of the top field.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Low coefficients `[c_0, …, c_{d-1}]` of the modulus.
    pub fn modulus(&self) -> &[u16] {
        &self.irr
    }

    /// The divisors of `n` in increasing order — the available levels of the
    /// tower.
    pub fn levels(&self) -> &[u8] {
        &self.levels
    }

    /// The additive identity.
    pub fn zero(&self) -> Elt {
        0
    }

    /// The multiplicative identity.
    pub fn one(&self) -> Elt {
        (self.p as usize).pow(self.d as u32 - 1) as Elt
    }

    // ---------------------------------------------------------- arithmetic

    /// `a + b`.
    #[inline]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        self.add_t[a as usize * self.size + b as usize]
    }

    /// `a - b`.
    #[inline]
    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg_t[b as usize])
    }

    /// `-a`.
    #[inline]
    pub fn neg(&self, a: Elt) -> Elt {
        self.neg_t[a as usize]
    }

    /// `a * b`.
    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.mul_t[a as usize * self.size + b as usize]
    }

    /// `a^{-1}`; panics on zero (callers validate).
    #[inline]
    pub fn inv(&self, a: Elt) -> Elt {
        assert!(a != 0, "inverse of zero");
        self.inv_t[a as usize]
    }

    /// `a / b`; panics when `b` is zero.
    #[inline]
    pub fn div(&self, a: Elt, b: Elt) -> Elt {
        self.mul(a, self.inv(b))
    }

    /// `a^e` by square and multiply.
    pub fn pow(&self, a: Elt, mut e: u64) -> Elt {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn frob_apply(&self, x: Elt, e: u8) -> Elt {
        self.frob_q[(e % self.n) as usize][x as usize]
    }

    /// Frobenius power `x ↦ x^{q^i}` (indices taken mod `n`).
    #[inline]
    pub fn frobenius(&self, x: Elt, i: u8) -> Elt {
        self.frob_apply(x, i)
    }

    /// Relative norm from `F_{q^k}` down to `F_q`:
    /// `N(x) = x · x^q · … · x^{q^{k-1}}`.
    ///
    /// Errors when `x` does not lie in `F_{q^k}`.
    pub fn norm_k(&self, x: Elt, k: u8) -> Result<Elt> {
        if self.n % k != 0 {
            return Err(Error::InvalidArgument(format!("{k} does not divide n")));
        }
        if self.sub_deg[x as usize] % k != 0 && k % self.sub_deg[x as usize] != 0
            || !self.in_subfield(x, k)
        {
            return Err(Error::InvalidArgument(format!(
                "element {x} is not in the level-{k} subfield"
            )));
        }
        let mut acc = self.one();
        for i in 0..k {
            acc = self.mul(acc, self.frobenius(x, i));
        }
        debug_assert!(self.in_subfield(acc, 1), "norm must land in the base field");
        Ok(acc)
    }

    /// The least `e | n` with `x ∈ F_{q^e}`.
    pub fn subfield_degree(&self, x: Elt) -> u8 {
        self.sub_deg[x as usize]
    }

    /// Whether `x ∈ F_{q^e}`.
    #[inline]
    pub fn in_subfield(&self, x: Elt, e: u8) -> bool {
        e % self.sub_deg[x as usize] == 0
    }

    /// All elements of `F_{q^e}` in increasing element order.
    pub fn enumerate_subfield(&self, e: u8) -> Result<&[Elt]> {
        self.sub_elems
            .get(&e)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::InvalidArgument(format!("{e} does not divide n")))
    }

    /// Least nonzero element of `F_{q^e}` in the element order, used for
    /// canonical projective representatives over level-`e` scalars.
    pub fn min_nonzero(&self, e: u8) -> Elt {
        self.min_nz[&e]
    }

    // --------------------------------------------------------- coordinates

    /// The expansion basis element: the least element of degree exactly `n`
    /// over `F_q`.  Coordinates from [`FieldCtx::q_coords`] refer to the
    /// basis `1, β, …, β^{n-1}`.
    pub fn beta(&self) -> Elt {
        self.beta
    }

    /// Coordinates of `x` over `F_q` in the basis `1, β, …, β^{n-1}`
    /// (entries are `F_q` elements, `n` of them).
    pub fn q_coords(&self, x: Elt) -> &[Elt] {
        &self.q_coords_t[x as usize]
    }

    /// Reassembles an element from its `F_q` coordinates.
    pub fn from_q_coords(&self, coords: &[Elt]) -> Result<Elt> {
        if coords.len() != self.n as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                self.n,
                coords.len()
            )));
        }
        let mut v = self.zero();
        for (i, &c) in coords.iter().enumerate() {
            if !self.in_subfield(c, 1) {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {c} is not in the base field"
                )));
            }
            v = self.add(v, self.mul(c, self.beta_pows[i]));
        }
        Ok(v)
    }

    /// An `F_q`-basis of the level-`e` subfield: powers `1, γ, …, γ^{e-1}`
    /// of the least element `γ` of degree exactly `e`.
    pub fn subfield_basis(&self, e: u8) -> Result<Vec<Elt>> {
        if self.n % e != 0 {
            return Err(Error::InvalidArgument(format!("{e} does not divide n")));
        }
        if e == 1 {
            return Ok(vec![self.one()]);
        }
        let gen = (1..self.size as Elt)
            .find(|&x| self.sub_deg[x as usize] == e)
            .expect("every divisor level has a generator");
        let mut pows = vec![self.one()];
        for _ in 1..e {
            let last = *pows.last().unwrap();
            pows.push(self.mul(last, gen));
        }
        Ok(pows)
    }

    /// Prime-field coefficients `[c_0, …, c_{d-1}]` (ascending powers of the
    /// modulus root) of `x`.
    pub fn fp_coords(&self, x: Elt) -> Vec<u16> {
        Self::index_to_poly_static(x as usize, self.p, self.d)
    }

    /// Element from prime-field coefficients (ascending powers).
    pub fn from_fp_coords(&self, coeffs: &[u16]) -> Result<Elt> {
        if coeffs.len() != self.d as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                self.d,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument(
                "coefficients must be reduced mod p".into(),
            ));
        }
        let mut v = 0usize;
        for (i, &c) in coeffs.iter().enumerate() {
            v += c as usize * (self.p as usize).pow((self.d as usize - 1 - i) as u32);
        }
        Ok(v as Elt)
    }

    /// Embeds a prime-field residue (`0 ≤ r < p`) into the tower.
    pub fn from_residue(&self, r: u16) -> Elt {
        let mut coeffs = vec![0u16; self.d as usize];
        coeffs[0] = r % self.p;
        self.from_fp_coords(&coeffs).expect("residue fits")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(FieldCtx::new(4, 1, 2).is_err(), "4 is not prime");
        assert!(FieldCtx::new(3, 1, 1).is_err(), "n = 1 is not a tower");
        assert!(FieldCtx::new(3, 2, 3).is_err(), "3^6 exceeds the 256 element cap");
    }

    #[test]
    fn rejects_reducible_modulus() {
        // x^2 - 1 = (x-1)(x+1) over F_3
        assert!(FieldCtx::with_irreducible(3, 1, 2, &[2, 0]).is_err());
    }

    #[test]
    fn f9_defaults() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0], "lex-least irreducible over F_3 is x^2+1");
        assert_eq!(f.one(), 3, "1 has coefficients (1,0), index 3");
        assert_eq!(f.size(), 9);
        assert_eq!(f.q(), 3);
    }

    #[test]
    fn f9_arithmetic_against_hand_values() {
        let f = FieldCtx::new(3, 1, 2).unwrap();
        let t = 1 as Elt; // x, the modulus root
        assert_eq!(f.mul(t, t), f.from_fp_coords(&[2, 0]).unwrap(), "t^2 = -1 = 2");
        assert_eq!(
            f.mul(t, f.add(t, f.one())),
            f.from_fp_coords(&[2, 1]).unwrap(),
            "t(t+1) = t^2 + t = 2 + t"
        );
        assert_eq!(f.inv(t), f.from_fp_coords(&[0, 2]).unwrap(), "1/t = -t = 2t");
    }

    #[test]
    fn element_order_is_lex_on_coefficients() {
        let f = FieldCtx::new(3, 1, 3).unwrap();
        let mut prev: Option<Vec<u16>> = None;
        for x in 0..f.size() as Elt {
            let c = f.fp_coords(x);
            if let Some(p) = prev {
                assert!(p < c, "index order must follow lex order on (c_0, ..)");
            }
            prev = Some(c);
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_subfields() {
        let f = FieldCtx::new(2, 2, 2).unwrap(); // F_16 over F_4
        for x in 0..f.size() as Elt {
            let fixed = f.frobenius(x, 1) == x;
            assert_eq!(fixed, f.subfield_degree(x) == 1);
        }
        assert_eq!(f.enumerate_subfield(1).unwrap().len(), 4);
    }

    #[test]
    fn q_coords_round_trip() {
        let f = FieldCtx::new(3, 1, 4).unwrap();
        for x in 0..f.size() as Elt {
            let c = f.q_coords(x).to_vec();
            assert_eq!(c.len(), 4);
            assert_eq!(f.from_q_coords(&c).unwrap(), x);
        }
    }
}
