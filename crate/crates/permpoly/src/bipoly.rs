//! Dense bivariate integer polynomials with a triangular coefficient table.
//!
//! A [`BiPoly`] of order `n` stores one signed 64-bit coefficient for every
//! monomial `x^i λ^j` with `i + j <= n`, as a flat row-major-by-`i` table of
//! `(n+1)(n+2)/2` entries. All arithmetic is overflow-checked: a permanent
//! polynomial of an order-`n` graph has nonnegative coefficients summing to
//! `n!`, so orders up to 20 are safe in 64 bits and anything past that is a
//! typed error rather than silent wraparound.

use thiserror::Error;

/// Largest polynomial order: 20! still fits in an `i64`.
pub const MAX_POLY_ORDER: usize = 20;

const FNV_OFFSET: u64 = 14695981039346656037;
const FNV_PRIME: u64 = 1099511628211;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial order {0} exceeds the coefficient-safe limit {MAX_POLY_ORDER}")]
    OrderTooLarge(usize),
    #[error("coefficient arithmetic overflowed 64 bits")]
    CoefficientOverflow,
    #[error("product degree would exceed the polynomial order bound")]
    DegreeOverflow,
    #[error("evaluation overflowed 128 bits")]
    EvaluationOverflow,
    #[error("malformed fingerprint bytes: {0}")]
    BadFingerprint(String),
}

/// Dense bivariate polynomial; `coeff(i, j)` is the coefficient of `x^i λ^j`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    order: usize,
    coeffs: Vec<i64>,
}

impl BiPoly {
    /// All-zero polynomial with degree bound `order`.
    pub fn zero(order: usize) -> Result<Self, PolyError> {
        if order > MAX_POLY_ORDER {
            return Err(PolyError::OrderTooLarge(order));
        }
        Ok(BiPoly {
            order,
            coeffs: vec![0; (order + 1) * (order + 2) / 2],
        })
    }

    /// The constant polynomial 1.
    pub fn one(order: usize) -> Result<Self, PolyError> {
        let mut p = BiPoly::zero(order)?;
        p.coeffs[0] = 1;
        Ok(p)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `x^i λ^j`; requires `i + j <= order`.
    pub fn coeff(&self, i: usize, j: usize) -> i64 {
        assert!(i + j <= self.order, "monomial degree out of range");
        self.coeffs[self.flat_index(i, j)]
    }

    #[inline]
    fn flat_index(&self, i: usize, j: usize) -> usize {
        let skipped = i * (self.order + 1) - (i * i).saturating_sub(i) / 2;
        skipped + j
    }

    /// Sets the coefficient of `x^i λ^j`; requires `i + j <= order`.
    pub fn set_coeff(&mut self, i: usize, j: usize, value: i64) {
        assert!(i + j <= self.order, "monomial degree out of range");
        let k = self.flat_index(i, j);
        self.coeffs[k] = value;
    }

    /// Nonzero terms `(i, j, c)` in ascending `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        let n = self.order;
        (0..=n)
            .flat_map(move |i| (0..=n - i).map(move |j| (i, j)))
            .filter_map(move |(i, j)| {
                let c = self.coeffs[self.flat_index(i, j)];
                (c != 0).then_some((i, j, c))
            })
    }

    /// Largest total degree with a nonzero coefficient; 0 for the zero
    /// polynomial.
    pub fn total_degree(&self) -> usize {
        self.terms().map(|(i, j, _)| i + j).max().unwrap_or(0)
    }

    /// Sum of all coefficients (exact in 128 bits).
    pub fn coefficient_sum(&self) -> i128 {
        self.coeffs.iter().map(|&c| c as i128).sum()
    }

    /// Elementwise checked addition; both operands must have the same order.
    pub fn add_assign(&mut self, other: &BiPoly) -> Result<(), PolyError> {
        self.accumulate(other, false)
    }

    /// Adds or subtracts `other` elementwise with checked arithmetic.
    pub(crate) fn accumulate(&mut self, other: &BiPoly, negate: bool) -> Result<(), PolyError> {
        assert_eq!(self.order, other.order, "polynomial order mismatch");
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            let rhs = if negate { b.checked_neg() } else { Some(b) }
                .ok_or(PolyError::CoefficientOverflow)?;
            *a = a.checked_add(rhs).ok_or(PolyError::CoefficientOverflow)?;
        }
        Ok(())
    }

    /// Multiplies by the linear factor `x·[has_x] + a·λ + b`, returning the
    /// product. Fails with [`PolyError::DegreeOverflow`] if the product would
    /// not fit the order bound.
    pub fn mul_linear_factor(&self, has_x: bool, a: i64, b: i64) -> Result<BiPoly, PolyError> {
        let mut p = self.clone();
        let deg = p.total_degree();
        p.mul_linear_factor_in_place(has_x, a, b, deg)?;
        Ok(p)
    }

    /// In-place multiply by `x·[has_x] + a·λ + b`, where entries above
    /// `cur_deg` total degree are known to be zero. Returns nothing; the
    /// caller tracks the new degree.
    pub(crate) fn mul_linear_factor_in_place(
        &mut self,
        has_x: bool,
        a: i64,
        b: i64,
        cur_deg: usize,
    ) -> Result<(), PolyError> {
        let raises = has_x || a != 0;
        if raises && cur_deg >= self.order && !self.top_stratum_is_zero() {
            return Err(PolyError::DegreeOverflow);
        }
        let new_deg = (cur_deg + raises as usize).min(self.order);
        let f = has_x as i64;
        // Descending (i, j): each write reads only entries not yet updated.
        for i in (0..=new_deg).rev() {
            for j in (0..=(new_deg - i).min(self.order - i)).rev() {
                let from_x = if i > 0 && f != 0 {
                    f.checked_mul(self.coeffs[self.flat_index(i - 1, j)])
                } else {
                    Some(0)
                };
                let from_l = if j > 0 && a != 0 {
                    a.checked_mul(self.coeffs[self.flat_index(i, j - 1)])
                } else {
                    Some(0)
                };
                let from_c = if b != 0 {
                    b.checked_mul(self.coeffs[self.flat_index(i, j)])
                } else {
                    Some(0)
                };
                let sum = from_x
                    .zip(from_l)
                    .and_then(|(x, l)| x.checked_add(l))
                    .zip(from_c)
                    .and_then(|(s, c)| s.checked_add(c))
                    .ok_or(PolyError::CoefficientOverflow)?;
                let k = self.flat_index(i, j);
                self.coeffs[k] = sum;
            }
        }
        Ok(())
    }

    fn top_stratum_is_zero(&self) -> bool {
        (0..=self.order).all(|i| self.coeffs[self.flat_index(i, self.order - i)] == 0)
    }

    /// Resets to the constant polynomial 1 without reallocating.
    pub(crate) fn reset_to_one(&mut self) {
        self.coeffs.fill(0);
        self.coeffs[0] = 1;
    }

    /// Evaluates at integer point `(x0, l0)` with checked 128-bit
    /// arithmetic.
    pub fn evaluate(&self, x0: i64, l0: i64) -> Result<i128, PolyError> {
        let mut total = 0i128;
        for (i, j, c) in self.terms() {
            let xp = checked_pow(x0 as i128, i).ok_or(PolyError::EvaluationOverflow)?;
            let lp = checked_pow(l0 as i128, j).ok_or(PolyError::EvaluationOverflow)?;
            let term = (c as i128)
                .checked_mul(xp)
                .and_then(|t| t.checked_mul(lp))
                .ok_or(PolyError::EvaluationOverflow)?;
            total = total
                .checked_add(term)
                .ok_or(PolyError::EvaluationOverflow)?;
        }
        Ok(total)
    }

    /// Canonical serialization plus its FNV-1a hash.
    pub fn fingerprint(&self) -> Fingerprint {
        let mut bytes = Vec::with_capacity(1 + 8 * self.coeffs.len());
        bytes.push(self.order as u8);
        for &c in &self.coeffs {
            bytes.extend_from_slice(&c.to_le_bytes());
        }
        Fingerprint::from_bytes(bytes)
    }

    /// Rebuilds a polynomial from canonical fingerprint bytes (the exact
    /// inverse of [`BiPoly::fingerprint`]).
    pub fn from_fingerprint_bytes(bytes: &[u8]) -> Result<BiPoly, PolyError> {
        let &order = bytes
            .first()
            .ok_or_else(|| PolyError::BadFingerprint("empty".into()))?;
        let order = order as usize;
        let mut p = BiPoly::zero(order)?;
        let want = 1 + 8 * p.coeffs.len();
        if bytes.len() != want {
            return Err(PolyError::BadFingerprint(format!(
                "order {order} needs {want} bytes, got {}",
                bytes.len()
            )));
        }
        for (k, chunk) in bytes[1..].chunks_exact(8).enumerate() {
            p.coeffs[k] = i64::from_le_bytes(chunk.try_into().unwrap());
        }
        Ok(p)
    }

    /// Canonical human-readable form with the Unicode λ.
    ///
    /// Terms are ordered by descending x-degree, then descending λ-degree;
    /// zero terms are omitted and unit coefficients are dropped on
    /// nonconstant monomials.
    pub fn format_text(&self) -> String {
        self.format_with("λ")
    }

    /// Canonical text with λ spelled `y`, for encoding-independent output.
    pub fn format_text_ascii(&self) -> String {
        self.format_with("y")
    }

    fn format_with(&self, lambda: &str) -> String {
        let mut out = String::new();
        for i in (0..=self.order).rev() {
            for j in (0..=self.order - i).rev() {
                let c = self.coeffs[self.flat_index(i, j)];
                if c == 0 {
                    continue;
                }
                if c < 0 {
                    out.push('-');
                } else if !out.is_empty() {
                    out.push('+');
                }
                let mag = c.unsigned_abs();
                if mag != 1 || (i == 0 && j == 0) {
                    out.push_str(&mag.to_string());
                }
                match i {
                    0 => {}
                    1 => out.push('x'),
                    _ => out.push_str(&format!("x^{i}")),
                }
                match j {
                    0 => {}
                    1 => out.push_str(lambda),
                    _ => out.push_str(&format!("{lambda}^{j}")),
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl std::fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BiPoly[n={}]({})", self.order, self.format_text_ascii())
    }
}

fn checked_pow(base: i128, exp: usize) -> Option<i128> {
    let mut acc = 1i128;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Canonical byte serialization of a [`BiPoly`] plus a 64-bit FNV-1a hash.
///
/// Equality (and ordering) is on the full bytes; the hash only accelerates
/// hash-map lookups and is never an equality proof by itself.
#[derive(Debug, Clone, Eq)]
pub struct Fingerprint {
    bytes: Vec<u8>,
    hash64: u64,
}

impl Fingerprint {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        let hash64 = fnv1a(&bytes);
        Fingerprint { bytes, hash64 }
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn hash64(&self) -> u64 {
        self.hash64
    }

    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.bytes.len() * 2);
        for b in &self.bytes {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    pub fn from_hex(hex: &str) -> Result<Fingerprint, PolyError> {
        if hex.len() % 2 != 0 || hex.is_empty() {
            return Err(PolyError::BadFingerprint("odd hex length".into()));
        }
        let bytes = (0..hex.len() / 2)
            .map(|k| {
                u8::from_str_radix(&hex[2 * k..2 * k + 2], 16)
                    .map_err(|_| PolyError::BadFingerprint("non-hex digit".into()))
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Ok(Fingerprint::from_bytes(bytes))
    }
}

impl PartialEq for Fingerprint {
    fn eq(&self, other: &Self) -> bool {
        self.hash64 == other.hash64 && self.bytes == other.bytes
    }
}

impl std::hash::Hash for Fingerprint {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        state.write_u64(self.hash64);
    }
}

impl PartialOrd for Fingerprint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fingerprint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bytes.cmp(&other.bytes)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}
