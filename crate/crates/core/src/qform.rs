//! Finite quadratic forms on abelian 2-groups of exponent dividing 8.
//!
//! A form assigns to each group element a value in `Q/2Z` with denominator
//! dividing 8, together with the symmetric pairing `b(x, y) =
//! (q(x+y) - q(x) - q(y)) / 2` with values in `Q/Z`. Every value is stored
//! as an integer numerator over the fixed denominator 8, so all arithmetic
//! is exact. Signatures mod 8 come from the Gauss-sum identity
//! `sum_x exp(pi*i*q(x)) = sqrt(|A|) * exp(pi*i*sigma/4)`, evaluated in the
//! cyclotomic ring [`Cyc16`].

use crate::cyclotomic::Cyc16;
use crate::error::Error;
use std::collections::BTreeSet;
use std::fmt;

/// Value of a quadratic form: a rational mod 2Z, numerator over 8.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct QValue(u8); // numerator mod 16

impl QValue {
    pub const ZERO: QValue = QValue(0);

    /// `num / den` mod 2Z; `den` must divide 8.
    pub fn new(num: i64, den: i64) -> Result<QValue, Error> {
        if den <= 0 || 8 % den != 0 {
            return Err(Error::InvalidForm(format!("denominator {den} must divide 8")));
        }
        let scaled = num * (8 / den);
        Ok(QValue(scaled.rem_euclid(16) as u8))
    }

    /// Numerator over denominator 8, in `0..16`.
    pub fn num16(self) -> u8 {
        self.0
    }

    pub fn is_integral(self) -> bool {
        self.0 % 8 == 0
    }

    pub fn add(self, other: QValue) -> QValue {
        QValue((self.0 + other.0) % 16)
    }

    /// `q(n*x) = n^2 * q(x)`.
    pub fn scale_square(self, n: i64) -> QValue {
        let n2 = (n * n).rem_euclid(16);
        QValue(((self.0 as i64 * n2) % 16) as u8)
    }

    /// Reduction mod Z, as a pairing value.
    pub fn mod_one(self) -> BValue {
        BValue(self.0 % 8)
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0;
        let g = gcd(n as i64, 8);
        if n == 0 {
            write!(f, "0")
        } else if g == 8 {
            write!(f, "{}", n / 8)
        } else {
            write!(f, "{}/{}", n as i64 / g, 8 / g)
        }
    }
}

/// Value of the symmetric pairing: a rational mod Z, numerator over 8.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct BValue(u8); // numerator mod 8

impl BValue {
    pub const ZERO: BValue = BValue(0);

    pub fn new(num: i64, den: i64) -> Result<BValue, Error> {
        if den <= 0 || 8 % den != 0 {
            return Err(Error::InvalidForm(format!("denominator {den} must divide 8")));
        }
        let scaled = num * (8 / den);
        Ok(BValue(scaled.rem_euclid(8) as u8))
    }

    pub fn num8(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn add(self, other: BValue) -> BValue {
        BValue((self.0 + other.0) % 8)
    }

    pub fn scale(self, n: i64) -> BValue {
        BValue((self.0 as i64 * n).rem_euclid(8) as u8)
    }

    /// `2 * b`, landing back in Q/2Z.
    pub fn double_as_q(self) -> QValue {
        QValue((self.0 * 2) % 16)
    }
}

impl fmt::Display for BValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0;
        let g = gcd(n as i64, 8);
        if n == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", n as i64 / g, 8 / g)
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A group element, as coefficients against the form's generators.
pub type Element = Vec<u8>;

/// The elementary building blocks every 2-elementary form decomposes into,
/// plus the cyclic blocks `q_alpha(2^k)` on Z/2^k.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ElementaryForm {
    /// `z` on Z/2 with q = 0.
    Z,
    /// `w` on Z/2 with q = 1.
    W,
    /// `u+(2)` on (Z/2)^2 with q = 0 on generators, pairing 1/2.
    UPlus2,
    /// `v+(2)` on (Z/2)^2 with q = 1 on generators, pairing 1/2.
    VPlus2,
    /// `q_alpha(2^k)` on Z/2^k with q = alpha/2^k; alpha in {1,-1,5,-5}, k in 1..=3.
    QAlpha { alpha: i8, k: u8 },
}

impl fmt::Display for ElementaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryForm::Z => write!(f, "z"),
            ElementaryForm::W => write!(f, "w"),
            ElementaryForm::UPlus2 => write!(f, "u+(2)"),
            ElementaryForm::VPlus2 => write!(f, "v+(2)"),
            ElementaryForm::QAlpha { alpha, k } => write!(f, "q_{}({})", alpha, 1u8 << k),
        }
    }
}

/// Complete isomorphism invariants of a 2-elementary form: the normal form
/// `z^(k-mu) (+) w^mu (+) (nondegenerate part)` determined by
/// `(rank, k, mu, sigma mod 8, delta)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FormClassification {
    /// Minimal number of generators.
    pub rank_a: usize,
    /// Rank of the radical of the pairing.
    pub k: usize,
    /// 1 when the form is nonzero on the radical.
    pub mu: u8,
    /// Signature residue of the (normalized) nondegenerate part.
    pub sigma_mod8: u8,
    /// 0 when all values of the form are integers.
    pub delta: u8,
}

impl fmt::Display for FormClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let push_pow = |parts: &mut Vec<String>, sym: &str, n: usize| {
            if n == 1 {
                parts.push(sym.to_string());
            } else if n > 1 {
                parts.push(format!("{sym}^{n}"));
            }
        };
        push_pow(&mut parts, "z", self.k - self.mu as usize);
        push_pow(&mut parts, "w", self.mu as usize);
        let m = self.rank_a - self.k;
        if self.delta == 0 {
            let v_count = (self.sigma_mod8 / 4) as usize;
            push_pow(&mut parts, "v+(2)", v_count);
            push_pow(&mut parts, "u+(2)", m / 2 - v_count);
        } else if self.mu == 0 {
            parts.push(format!("q({},1,{})", m, self.sigma_mod8));
        } else {
            push_pow(&mut parts, "q_1(2)", m);
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" (+) "))
        }
    }
}

/// A finite quadratic form on a direct sum of cyclic 2-groups.
///
/// Stored by generator data: the cyclic orders, `q` on each generator and
/// the pairing on each generator pair; values elsewhere follow from
/// `q(sum c_i g_i) = sum c_i^2 q(g_i) + sum_{i<j} 2 c_i c_j b(g_i, g_j)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteQuadraticForm {
    orders: Vec<u8>,
    q_gen: Vec<QValue>,
    b_gen: Vec<Vec<BValue>>,
}

impl FiniteQuadraticForm {
    /// Build a form from generator data, validating the axioms.
    pub fn new(
        orders: Vec<u8>,
        q_gen: Vec<QValue>,
        b_gen: Vec<Vec<BValue>>,
    ) -> Result<FiniteQuadraticForm, Error> {
        let n = orders.len();
        if q_gen.len() != n || b_gen.len() != n || b_gen.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidForm("mismatched generator data sizes".into()));
        }
        for (i, &d) in orders.iter().enumerate() {
            if !matches!(d, 2 | 4 | 8) {
                return Err(Error::InvalidForm(format!("generator order {d} not in {{2,4,8}}")));
            }
            // q(d*g) = d^2 q(g) must vanish mod 2.
            if (d as i64 * d as i64 * q_gen[i].num16() as i64) % 16 != 0 {
                return Err(Error::InvalidForm(format!(
                    "q value {} incompatible with generator order {d}",
                    q_gen[i]
                )));
            }
            // b(g, g) = q(g) mod 1.
            if b_gen[i][i] != q_gen[i].mod_one() {
                return Err(Error::InvalidForm(format!(
                    "pairing diagonal b(g{i},g{i}) must equal q(g{i}) mod 1"
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if b_gen[i][j] != b_gen[j][i] {
                    return Err(Error::InvalidForm("pairing not symmetric".into()));
                }
                if !b_gen[i][j].scale(orders[i] as i64).is_zero() {
                    return Err(Error::InvalidForm(format!(
                        "pairing b(g{i},g{j}) incompatible with generator order"
                    )));
                }
            }
        }
        Ok(FiniteQuadraticForm { orders, q_gen, b_gen })
    }

    /// The zero form on the trivial group.
    pub fn trivial() -> FiniteQuadraticForm {
        FiniteQuadraticForm { orders: vec![], q_gen: vec![], b_gen: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u8] {
        &self.orders
    }

    /// Group order.
    pub fn group_size(&self) -> usize {
        self.orders.iter().map(|&d| d as usize).product()
    }

    /// Exponent e with |A| = 2^e.
    fn size_log2(&self) -> u32 {
        self.orders.iter().map(|&d| (d as u32).trailing_zeros()).sum()
    }

    pub fn is_two_elementary(&self) -> bool {
        self.orders.iter().all(|&d| d == 2)
    }

    /// Iterate all group elements in mixed-radix order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        let orders = self.orders.clone();
        let total = self.group_size();
        (0..total).map(move |mut idx| {
            let mut e = vec![0u8; orders.len()];
            for (i, &d) in orders.iter().enumerate() {
                e[i] = (idx % d as usize) as u8;
                idx /= d as usize;
            }
            e
        })
    }

    pub fn zero_element(&self) -> Element {
        vec![0; self.orders.len()]
    }

    pub fn add_elements(&self, x: &Element, y: &Element) -> Element {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((&a, &b), &d)| (a + b) % d)
            .collect()
    }

    pub fn element_order(&self, x: &Element) -> u8 {
        x.iter()
            .zip(&self.orders)
            .map(|(&c, &d)| if c == 0 { 1 } else { d / gcd(c as i64, d as i64) as u8 })
            .max()
            .unwrap_or(1)
    }

    /// Evaluate q on an arbitrary element.
    pub fn q(&self, x: &Element) -> QValue {
        let mut acc: i64 = 0;
        for (i, &c) in x.iter().enumerate() {
            let c = c as i64;
            acc += c * c % 16 * self.q_gen[i].num16() as i64;
            for (j, &c2) in x.iter().enumerate().skip(i + 1) {
                acc += 2 * c * c2 as i64 * self.b_gen[i][j].num8() as i64;
            }
        }
        QValue(acc.rem_euclid(16) as u8)
    }

    /// Evaluate the pairing on a pair of elements.
    pub fn b(&self, x: &Element, y: &Element) -> BValue {
        let mut acc: i64 = 0;
        for (i, &c) in x.iter().enumerate() {
            for (j, &c2) in y.iter().enumerate() {
                acc += c as i64 * c2 as i64 * self.b_gen[i][j].num8() as i64;
            }
        }
        BValue(acc.rem_euclid(8) as u8)
    }

    /// Orthogonal sum.
    pub fn direct_sum(&self, other: &FiniteQuadraticForm) -> FiniteQuadraticForm {
        let n = self.rank();
        let m = other.rank();
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        let mut q_gen = self.q_gen.clone();
        q_gen.extend_from_slice(&other.q_gen);
        let mut b_gen = vec![vec![BValue::ZERO; n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                b_gen[i][j] = self.b_gen[i][j];
            }
        }
        for i in 0..m {
            for j in 0..m {
                b_gen[n + i][n + j] = other.b_gen[i][j];
            }
        }
        FiniteQuadraticForm { orders, q_gen, b_gen }
    }

    /// All elements of the radical of the pairing.
    pub fn radical(&self) -> Vec<Element> {
        let gens: Vec<Element> = (0..self.rank())
            .map(|i| {
                let mut e = self.zero_element();
                e[i] = 1;
                e
            })
            .collect();
        self.elements()
            .filter(|x| gens.iter().all(|g| self.b(x, g).is_zero()))
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().len() == 1
    }

    /// Signature residue via the Gauss-sum identity.
    ///
    /// Requires a nondegenerate pairing: a radical either cancels the sum
    /// or scales it off the eight admissible values, so no residue would
    /// match.
    pub fn signature_mod8(&self) -> Result<u8, Error> {
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateBilinearForm);
        }
        let mut sum = Cyc16::ZERO;
        for x in self.elements() {
            sum += Cyc16::root_power(self.q(&x).num16() as i64);
        }
        let scale = Cyc16::sqrt_pow2(self.size_log2());
        for sigma in 0..8i64 {
            if sum == scale * Cyc16::root_power(2 * sigma) {
                return Ok(sigma as u8);
            }
        }
        Err(Error::GaussSumMismatch)
    }

    /// Split a 2-elementary form into its radical data and a nondegenerate
    /// complement: returns `(k, mu, nondegenerate part)` with the radical
    /// isomorphic to `z^(k-mu) (+) w^mu`.
    pub fn radical_decompose(&self) -> Result<(usize, u8, FiniteQuadraticForm), Error> {
        if !self.is_two_elementary() {
            return Err(Error::NotTwoElementary(format!("generator orders {:?}", self.orders)));
        }
        let rad = self.radical();
        let k = rad.len().trailing_zeros() as usize;
        let mu = if rad.iter().any(|x| !self.q(x).is_integral()) {
            return Err(Error::InvalidForm("non-integral value on the radical".into()));
        } else if rad.iter().any(|x| self.q(x).num16() == 8) {
            1u8
        } else {
            0u8
        };

        // F2 span of the radical, then extend greedily to a complement.
        let to_mask = |e: &Element| -> u32 {
            e.iter().enumerate().fold(0u32, |m, (i, &c)| m | ((c as u32 & 1) << i))
        };
        let mut span_basis: Vec<u32> = Vec::new();
        let insert = |basis: &mut Vec<u32>, mut v: u32| -> bool {
            for &b in basis.iter() {
                let pivot = 1u32 << (31 - b.leading_zeros());
                if v & pivot != 0 {
                    v ^= b;
                }
            }
            if v != 0 {
                basis.push(v);
                true
            } else {
                false
            }
        };
        for x in &rad {
            let m = to_mask(x);
            if m != 0 {
                insert(&mut span_basis, m);
            }
        }
        let mut complement: Vec<Element> = Vec::new();
        for x in self.elements() {
            let m = to_mask(&x);
            if m != 0 && insert(&mut span_basis, m) {
                complement.push(x);
            }
        }
        debug_assert_eq!(complement.len(), self.rank() - k);

        let nd = self.subform_on(&complement)?;
        Ok((k, mu, nd))
    }

    /// The form restricted to the subgroup generated by the given
    /// independent elements (taken as new generators).
    pub fn subform_on(&self, gens: &[Element]) -> Result<FiniteQuadraticForm, Error> {
        let orders: Vec<u8> = gens.iter().map(|g| self.element_order(g)).collect();
        let q_gen: Vec<QValue> = gens.iter().map(|g| self.q(g)).collect();
        let b_gen: Vec<Vec<BValue>> = gens
            .iter()
            .map(|g| gens.iter().map(|h| self.b(g, h)).collect())
            .collect();
        FiniteQuadraticForm::new(orders, q_gen, b_gen)
    }

    /// Complete classification of a 2-elementary form.
    ///
    /// When `mu = 1` the nondegenerate complement is only defined up to
    /// absorbing `w` (e.g. `w (+) u+(2)` and `w (+) v+(2)` are isomorphic),
    /// so its signature is normalized to the catalog's normal form.
    pub fn classify(&self) -> Result<FormClassification, Error> {
        let (k, mu, nd) = self.radical_decompose()?;
        let rank_a = self.rank();
        let delta = if self.elements().any(|x| !self.q(&x).is_integral()) { 1 } else { 0 };
        let mut sigma_mod8 = if nd.rank() == 0 { 0 } else { nd.signature_mod8()? };
        if mu == 1 {
            sigma_mod8 = if delta == 0 { 0 } else { ((rank_a - k) % 8) as u8 };
        }
        Ok(FormClassification { rank_a, k, mu, sigma_mod8, delta })
    }

    /// All elements `v` with `b(x, v) = q(x) mod 1` for every `x`.
    pub fn characteristic_elements(&self) -> Vec<Element> {
        let all: Vec<Element> = self.elements().collect();
        all.iter()
            .filter(|v| all.iter().all(|x| self.b(x, v) == self.q(x).mod_one()))
            .cloned()
            .collect()
    }

    /// Brute-force isomorphism oracle: exhaustive generator-image search for
    /// a group isomorphism carrying `q` to `q`. Refuses groups of order
    /// above 256.
    pub fn is_isomorphic(&self, other: &FiniteQuadraticForm) -> Result<bool, Error> {
        const BOUND: usize = 256;
        let size = self.group_size();
        if size > BOUND || other.group_size() > BOUND {
            return Err(Error::OracleScaleExceeded {
                size: size.max(other.group_size()),
                bound: BOUND,
            });
        }
        if size != other.group_size() {
            return Ok(false);
        }
        // Cheap invariants first: multisets of (element order, q value).
        let profile = |f: &FiniteQuadraticForm| -> Vec<(u8, QValue)> {
            let mut p: Vec<(u8, QValue)> =
                f.elements().map(|x| (f.element_order(&x), f.q(&x))).collect();
            p.sort_unstable();
            p
        };
        if profile(self) != profile(other) {
            return Ok(false);
        }
        // The radical and the values on it are isomorphism invariants,
        // and they separate the cases the value profile cannot (the
        // Gauss sum vanishes when the form is nonzero on the radical).
        let self_radical = self.radical();
        let other_radical = other.radical();
        if self_radical.len() != other_radical.len() {
            return Ok(false);
        }
        let rad_values = |f: &FiniteQuadraticForm, rad: &[Element]| -> Vec<QValue> {
            let mut v: Vec<QValue> = rad.iter().map(|x| f.q(x)).collect();
            v.sort_unstable();
            v
        };
        if rad_values(self, &self_radical) != rad_values(other, &other_radical) {
            return Ok(false);
        }

        let candidates: Vec<Element> = other.elements().collect();
        // An isomorphism respects the radical, so candidates for a radical
        // generator come from the radical and vice versa.
        let gen_in_radical: Vec<bool> = (0..self.rank())
            .map(|i| self.b_gen[i].iter().all(|b| b.is_zero()))
            .collect();
        let other_radical: BTreeSet<Element> = other_radical.into_iter().collect();
        let mut images: Vec<Element> = Vec::with_capacity(self.rank());
        let mut span: BTreeSet<Element> = BTreeSet::new();
        span.insert(other.zero_element());
        let found = self.search_images(
            other,
            &candidates,
            &gen_in_radical,
            &other_radical,
            &mut images,
            &mut span,
        );
        Ok(found)
    }

    // Depth-first generator-image search. The span of placed images is
    // tracked so candidates already generated are skipped: the map must be
    // bijective, so each generator image has to enlarge the subgroup.
    #[allow(clippy::too_many_arguments)]
    fn search_images(
        &self,
        other: &FiniteQuadraticForm,
        candidates: &[Element],
        gen_in_radical: &[bool],
        other_radical: &BTreeSet<Element>,
        images: &mut Vec<Element>,
        span: &mut BTreeSet<Element>,
    ) -> bool {
        let i = images.len();
        if i == self.rank() {
            return span.len() == other.group_size();
        }
        'cand: for y in candidates {
            if other.element_order(y) != self.orders[i] {
                continue;
            }
            if other.q(y) != self.q_gen[i] {
                continue;
            }
            if other_radical.contains(y) != gen_in_radical[i] {
                continue;
            }
            if span.contains(y) {
                continue;
            }
            for (j, img) in images.iter().enumerate() {
                if other.b(img, y) != self.b_gen[j][i] {
                    continue 'cand;
                }
            }
            let mut extended: BTreeSet<Element> = span
                .iter()
                .flat_map(|s| {
                    (0..self.orders[i]).map(|c| {
                        let mut acc = s.clone();
                        for _ in 0..c {
                            acc = other.add_elements(&acc, y);
                        }
                        acc
                    })
                })
                .collect();
            images.push(y.clone());
            if self.search_images(
                other,
                candidates,
                gen_in_radical,
                other_radical,
                images,
                &mut extended,
            ) {
                return true;
            }
            images.pop();
        }
        false
    }
}

/// Instantiate an elementary form from the catalog.
pub fn elementary_form(kind: ElementaryForm) -> Result<FiniteQuadraticForm, Error> {
    let q = |num: i64, den: i64| QValue::new(num, den).expect("catalog value");
    let b = |num: i64, den: i64| BValue::new(num, den).expect("catalog value");
    match kind {
        ElementaryForm::Z => {
            FiniteQuadraticForm::new(vec![2], vec![QValue::ZERO], vec![vec![BValue::ZERO]])
        }
        ElementaryForm::W => {
            FiniteQuadraticForm::new(vec![2], vec![q(1, 1)], vec![vec![BValue::ZERO]])
        }
        ElementaryForm::UPlus2 => FiniteQuadraticForm::new(
            vec![2, 2],
            vec![QValue::ZERO, QValue::ZERO],
            vec![vec![BValue::ZERO, b(1, 2)], vec![b(1, 2), BValue::ZERO]],
        ),
        ElementaryForm::VPlus2 => FiniteQuadraticForm::new(
            vec![2, 2],
            vec![q(1, 1), q(1, 1)],
            vec![vec![BValue::ZERO, b(1, 2)], vec![b(1, 2), BValue::ZERO]],
        ),
        ElementaryForm::QAlpha { alpha, k } => {
            if !matches!(alpha, 1 | -1 | 5 | -5) || !matches!(k, 1..=3) {
                return Err(Error::UnknownElementaryForm(format!(
                    "q_{alpha}(2^{k}): alpha must be one of 1,-1,5,-5 and k in 1..=3"
                )));
            }
            let d = 1i64 << k;
            let qv = q(alpha as i64, d);
            FiniteQuadraticForm::new(vec![d as u8], vec![qv], vec![vec![qv.mod_one()]])
        }
    }
}

/// Orthogonal sum of a list of elementary forms.
pub fn sum_of(kinds: &[ElementaryForm]) -> Result<FiniteQuadraticForm, Error> {
    let mut acc = FiniteQuadraticForm::trivial();
    for &k in kinds {
        acc = acc.direct_sum(&elementary_form(k)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ElementaryForm::*;

    fn form(kinds: &[ElementaryForm]) -> FiniteQuadraticForm {
        sum_of(kinds).unwrap()
    }

    #[test]
    fn elementary_values_match_catalog() {
        let u = form(&[UPlus2]);
        assert_eq!(u.q(&vec![1, 0]), QValue::ZERO);
        assert_eq!(u.q(&vec![0, 1]), QValue::ZERO);
        assert_eq!(u.b(&vec![1, 0], &vec![0, 1]), BValue::new(1, 2).unwrap());
        assert_eq!(u.q(&vec![1, 1]), QValue::new(1, 1).unwrap());

        let z = form(&[Z]);
        assert_eq!(z.q(&vec![1]), QValue::ZERO);

        let qm1 = form(&[QAlpha { alpha: -1, k: 2 }]);
        assert_eq!(qm1.q(&vec![1]), QValue::new(-1, 4).unwrap());
        assert_eq!(qm1.q(&vec![2]), QValue::new(-1, 1).unwrap());
    }

    #[test]
    fn unknown_kind_rejected() {
        assert!(elementary_form(QAlpha { alpha: 3, k: 1 }).is_err());
        assert!(elementary_form(QAlpha { alpha: 1, k: 4 }).is_err());
    }

    #[test]
    fn signature_of_blocks() {
        assert_eq!(form(&[UPlus2]).signature_mod8().unwrap(), 0);
        assert_eq!(form(&[VPlus2]).signature_mod8().unwrap(), 4);
        assert_eq!(form(&[QAlpha { alpha: 1, k: 1 }]).signature_mod8().unwrap(), 1);
        assert_eq!(form(&[QAlpha { alpha: -1, k: 1 }]).signature_mod8().unwrap(), 7);
        assert_eq!(form(&[UPlus2, QAlpha { alpha: 1, k: 1 }]).signature_mod8().unwrap(), 1);
        assert_eq!(
            form(&[QAlpha { alpha: 1, k: 1 }, QAlpha { alpha: -1, k: 1 }])
                .signature_mod8()
                .unwrap(),
            0
        );
        // Cyclic blocks of order 4 and 8.
        assert_eq!(form(&[QAlpha { alpha: -1, k: 2 }]).signature_mod8().unwrap(), 7);
        assert_eq!(form(&[QAlpha { alpha: 5, k: 2 }]).signature_mod8().unwrap(), 5);
        assert_eq!(form(&[QAlpha { alpha: 1, k: 3 }]).signature_mod8().unwrap(), 1);
    }

    #[test]
    fn signature_rejects_degenerate() {
        assert_eq!(form(&[Z]).signature_mod8(), Err(Error::DegenerateBilinearForm));
        assert_eq!(form(&[W]).signature_mod8(), Err(Error::DegenerateBilinearForm));
    }

    #[test]
    fn u_u_isomorphic_to_v_v() {
        let uu = form(&[UPlus2, UPlus2]);
        let vv = form(&[VPlus2, VPlus2]);
        assert!(uu.is_isomorphic(&vv).unwrap());
        assert!(!form(&[Z]).is_isomorphic(&form(&[W])).unwrap());
        assert!(uu.is_isomorphic(&uu).unwrap());
    }

    #[test]
    fn radical_decomposition() {
        let f = form(&[Z, W, UPlus2]);
        let (k, mu, nd) = f.radical_decompose().unwrap();
        assert_eq!((k, mu), (2, 1));
        assert_eq!(nd.rank(), 2);
        assert!(nd.is_nondegenerate());
        let (k, mu, nd) = form(&[UPlus2]).radical_decompose().unwrap();
        assert_eq!((k, mu, nd.rank()), (0, 0, 2));
        assert!(form(&[QAlpha { alpha: 1, k: 2 }]).radical_decompose().is_err());
    }

    #[test]
    fn reassembly_is_isomorphic() {
        for kinds in [
            vec![Z, W, UPlus2],
            vec![W, VPlus2],
            vec![Z, Z, QAlpha { alpha: 1, k: 1 }],
            vec![W, QAlpha { alpha: -1, k: 1 }, QAlpha { alpha: 1, k: 1 }],
        ] {
            let f = form(&kinds);
            let (k, mu, nd) = f.radical_decompose().unwrap();
            let mut parts: Vec<ElementaryForm> = Vec::new();
            parts.extend(std::iter::repeat(Z).take(k - mu as usize));
            parts.extend(std::iter::repeat(W).take(mu as usize));
            let rebuilt = form(&parts).direct_sum(&nd);
            assert!(f.is_isomorphic(&rebuilt).unwrap());
        }
    }

    #[test]
    fn classification_values() {
        let c = FiniteQuadraticForm::trivial().classify().unwrap();
        assert_eq!((c.rank_a, c.k, c.mu, c.sigma_mod8, c.delta), (0, 0, 0, 0, 0));
        let c = form(&[UPlus2]).classify().unwrap();
        assert_eq!((c.rank_a, c.k, c.mu, c.sigma_mod8, c.delta), (2, 0, 0, 0, 0));
        let c = form(&[W]).classify().unwrap();
        assert_eq!((c.rank_a, c.k, c.mu, c.sigma_mod8, c.delta), (1, 1, 1, 0, 0));
        let c = form(&[QAlpha { alpha: -1, k: 1 }]).classify().unwrap();
        assert_eq!((c.rank_a, c.k, c.mu, c.sigma_mod8, c.delta), (1, 0, 0, 7, 1));
        // w absorbs the u/v distinction.
        let a = form(&[W, UPlus2]).classify().unwrap();
        let b = form(&[W, VPlus2]).classify().unwrap();
        assert_eq!(a, b);
        assert!(form(&[W, UPlus2]).is_isomorphic(&form(&[W, VPlus2])).unwrap());
    }

    #[test]
    fn characteristic_elements_examples() {
        assert_eq!(form(&[UPlus2]).characteristic_elements(), vec![vec![0, 0]]);
        // w has zero pairing, so both elements qualify; q_(-1)(2) pins the
        // nonzero one.
        assert_eq!(form(&[W]).characteristic_elements(), vec![vec![0], vec![1]]);
        assert_eq!(
            form(&[QAlpha { alpha: -1, k: 1 }]).characteristic_elements(),
            vec![vec![1]]
        );
        let f = form(&[QAlpha { alpha: 1, k: 1 }, QAlpha { alpha: -1, k: 1 }]);
        assert_eq!(f.characteristic_elements(), vec![vec![1, 1]]);
    }

    #[test]
    fn characteristic_unique_for_nondegenerate_delta1() {
        // Sweep catalog sums of order <= 64: a nondegenerate form with a
        // non-integral value has exactly one characteristic element, zero
        // exactly when all values are integral.
        let kinds = [
            UPlus2,
            VPlus2,
            QAlpha { alpha: 1, k: 1 },
            QAlpha { alpha: -1, k: 1 },
        ];
        let mut stack: Vec<Vec<ElementaryForm>> = vec![vec![]];
        while let Some(base) = stack.pop() {
            for &k in &kinds {
                let mut kinds2 = base.clone();
                kinds2.push(k);
                let f = form(&kinds2);
                if f.group_size() > 64 {
                    continue;
                }
                stack.push(kinds2);
                if !f.is_nondegenerate() {
                    continue;
                }
                let chars = f.characteristic_elements();
                assert_eq!(chars.len(), 1);
                let delta_zero = f.elements().all(|x| f.q(&x).is_integral());
                let char_zero = chars[0].iter().all(|&c| c == 0);
                assert_eq!(delta_zero, char_zero);
            }
        }
    }

    #[test]
    fn oracle_scale_bound() {
        let big = form(&[UPlus2; 5]); // order 1024
        assert!(matches!(
            big.is_isomorphic(&big),
            Err(Error::OracleScaleExceeded { .. })
        ));
    }

    #[test]
    fn display_normal_form() {
        assert_eq!(form(&[Z, W, UPlus2]).classify().unwrap().to_string(), "z (+) w (+) u+(2)");
        assert_eq!(
            form(&[QAlpha { alpha: -1, k: 1 }]).classify().unwrap().to_string(),
            "q(1,1,7)"
        );
    }
}
