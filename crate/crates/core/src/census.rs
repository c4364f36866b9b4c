//! Census of genus-invariant tuples: candidate generation, the generic
//! existence-condition engine, per-surface transcriptions of the same
//! conditions, the related-involution map, and real-part topology labels.
//!
//! Tuples are validated against two independent engines. The generic one
//! evaluates the numbered congruence/inequality/boundary clauses in terms
//! of invariants derived from the lattice fixtures; the per-surface one
//! evaluates the explicit condition lists. The census requires both to
//! agree (an acceptance criterion).

use crate::error::Error;
use crate::lattice::{make_type, SThetaType, Surface};
use crate::matrix;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

/// A candidate component invariant: `(r, a; H, delta_phiS, v)` for one of
/// the five surfaces. The field order gives the canonical sort order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GenusInvariant {
    pub surface: Surface,
    /// Index into the surface's subgroup catalog.
    pub h: usize,
    pub r: u8,
    pub a: u8,
    pub delta_phi_s: u8,
    /// Characteristic element, as 0/1 coefficients over the S basis.
    /// Present exactly when `delta_phi_s == 0`.
    pub v: Option<Vec<u8>>,
}

/// Existence type of a tuple.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TupleType {
    Zero,
    Ia,
    Ib,
}

impl fmt::Display for TupleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TupleType::Zero => write!(f, "0"),
            TupleType::Ia => write!(f, "Ia"),
            TupleType::Ib => write!(f, "Ib"),
        }
    }
}

impl GenusInvariant {
    pub fn fixture(&self) -> &'static SThetaType {
        make_type(self.surface)
    }

    /// 0 when the real structure acts trivially mod 2, i.e. `(delta_phiS,
    /// v) = (0, 0)`.
    pub fn delta_phi(&self) -> u8 {
        match &self.v {
            Some(v) if self.delta_phi_s == 0 && v.iter().all(|&b| b == 0) => 0,
            _ => 1,
        }
    }

    pub fn tuple_type(&self) -> TupleType {
        if self.delta_phi_s == 1 {
            TupleType::Ib
        } else if self.delta_phi() == 0 {
            TupleType::Zero
        } else {
            TupleType::Ia
        }
    }

    pub fn h_name(&self) -> &'static str {
        self.fixture().subgroup(self.h).name
    }

    /// Printable name of `v` over the basis labels.
    pub fn v_name(&self) -> Option<String> {
        let t = self.fixture();
        self.v.as_ref().map(|v| {
            let parts: Vec<&str> = v
                .iter()
                .zip(&t.basis_names)
                .filter(|(&b, _)| b == 1)
                .map(|(_, &n)| n)
                .collect();
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join("+")
            }
        })
    }

    /// Structural validity: catalog membership, `v` presence, `v` in `H`
    /// and characteristic for `q_rho`.
    pub fn validate(&self) -> Result<(), Error> {
        let t = self.fixture();
        if self.h >= t.subgroups.len() {
            return Err(Error::SubgroupNotInCatalog(format!("index {}", self.h)));
        }
        match (&self.v, self.delta_phi_s) {
            (None, 1) => Ok(()),
            (Some(v), 0) => {
                if v.len() != t.s_rank() {
                    return Err(Error::InvalidTuple("v has wrong length".into()));
                }
                if !t.subgroup(self.h).contains(t.s_rank(), v) {
                    return Err(Error::InvalidTuple(format!(
                        "v not in subgroup {}",
                        self.h_name()
                    )));
                }
                if !characteristic_vs(t, self.h)?.contains(v) {
                    return Err(Error::InvalidTuple("v not characteristic for q_rho".into()));
                }
                Ok(())
            }
            _ => Err(Error::InvalidTuple(
                "v must be present exactly when delta_phiS = 0".into(),
            )),
        }
    }
}

/// Real-part topology of the quotient data at `(r, a, delta_phi)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TopologyLabel {
    Empty,
    TwoTori,
    Generic { genus: u8, spheres: u8 },
}

impl fmt::Display for TopologyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyLabel::Empty => write!(f, "empty"),
            TopologyLabel::TwoTori => write!(f, "T1+T1"),
            TopologyLabel::Generic { genus, spheres } => write!(f, "T{genus}+{spheres}T0"),
        }
    }
}

/// `X(R)` up to homeomorphism from `(r, a, delta_phi)`.
pub fn topology(r: u8, a: u8, delta_phi: u8) -> Result<TopologyLabel, Error> {
    if (r, a, delta_phi) == (10, 10, 0) {
        return Ok(TopologyLabel::Empty);
    }
    if (r, a, delta_phi) == (10, 8, 0) {
        return Ok(TopologyLabel::TwoTori);
    }
    let (r, a) = (r as i64, a as i64);
    let genus2 = 22 - r - a;
    let spheres2 = r - a;
    if genus2 < 0 || spheres2 < 0 || genus2 % 2 != 0 || spheres2 % 2 != 0 {
        return Err(Error::InadmissibleTopology { r, a });
    }
    Ok(TopologyLabel::Generic {
        genus: (genus2 / 2) as u8,
        spheres: (spheres2 / 2) as u8,
    })
}

/// Invariants derived from a tuple and its fixture, consumed by the
/// generic condition engine.
#[derive(Clone, Debug)]
pub struct DerivedInvariants {
    pub a_h_plus: usize,
    pub a_h_minus: usize,
    pub a_gamma: usize,
    pub a_h: usize,
    pub delta_h_plus: u8,
    pub delta_h_minus: u8,
    pub delta_h: u8,
    pub k_rho: usize,
    pub mu_rho: u8,
    pub sigma_rho: u8,
    /// Defined mod 4, present when `v` is.
    pub c_v: Option<u8>,
    pub delta_phi_s_plus: u8,
    pub delta_phi_s_minus: u8,
    /// Present when the matching `delta_phi_s_pm` is 0.
    pub epsilon_plus: Option<u8>,
    pub epsilon_minus: Option<u8>,
}

/// All characteristic elements of `q_rho` on the catalog subgroup, as
/// S-basis bit vectors.
fn characteristic_vs(t: &SThetaType, h_idx: usize) -> Result<Vec<Vec<u8>>, Error> {
    let q_rho = t.q_rho(h_idx)?;
    let gens = &t.subgroup(h_idx).gens;
    let rank = t.s_rank();
    Ok(q_rho
        .characteristic_elements()
        .into_iter()
        .map(|coeffs| {
            let mut bits = vec![0u8; rank];
            for (c, g) in coeffs.iter().zip(gens) {
                for (b, &gi) in bits.iter_mut().zip(g) {
                    *b = (*b + (c * (gi.rem_euclid(2) as u8))) % 2;
                }
            }
            bits
        })
        .collect())
}

/// Coefficients of `v` over the subgroup generators.
fn v_in_subgroup_coords(t: &SThetaType, h_idx: usize, v: &[u8]) -> Option<Vec<u8>> {
    let gens = &t.subgroup(h_idx).gens;
    let rank = t.s_rank();
    // At most 2 generators: try all coefficient patterns.
    let k = gens.len();
    for mask in 0..(1u8 << k) {
        let coeffs: Vec<u8> = (0..k).map(|i| (mask >> i) & 1).collect();
        let mut bits = vec![0u8; rank];
        for (c, g) in coeffs.iter().zip(gens) {
            for (b, &gi) in bits.iter_mut().zip(g) {
                *b = (*b + (c * (gi.rem_euclid(2) as u8))) % 2;
            }
        }
        if bits == v {
            return Some(coeffs);
        }
    }
    None
}

pub fn derived_invariants(g: &GenusInvariant) -> Result<DerivedInvariants, Error> {
    g.validate()?;
    let t = g.fixture();
    let q_rho = t.q_rho(g.h)?;
    let cls = q_rho.classify()?;
    let a_h = cls.rank_a;
    let a_gamma = t.a_gamma();
    let ellipsoid = g.surface == Surface::Ellipsoid;
    let (a_h_plus, a_h_minus) = if ellipsoid { (1, 1) } else { (0, a_h) };
    // H+ is trivial except in the glued case, where it carries the whole
    // of q_rho; same for H-.
    let (delta_h_plus, delta_h_minus) =
        if ellipsoid { (cls.delta, cls.delta) } else { (0, cls.delta) };

    debug_assert_eq!(a_h, a_h_plus + a_h_minus - a_gamma);

    let c_v = match &g.v {
        None => None,
        Some(v) => {
            let coords = v_in_subgroup_coords(t, g.h, v)
                .ok_or_else(|| Error::InvalidTuple("v not in subgroup".into()))?;
            // c_v / 2 = q_rho(v) mod 2; values are halves, so the numerator
            // over 8 is divisible by 4.
            let num = q_rho.q(&coords).num16();
            debug_assert_eq!(num % 4, 0);
            Some(num / 4)
        }
    };

    let (delta_phi_s_plus, delta_phi_s_minus) = match &g.v {
        None => (1, 1),
        Some(v) => {
            let plus = match t.disc_plus() {
                None => u8::from(v.iter().any(|&b| b != 0)),
                Some(disc) => match t.image_in_plus(v) {
                    Some(img) if disc.two_torsion_characteristics().contains(&img) => 0,
                    _ => 1,
                },
            };
            let minus = match t.image_in_minus(v) {
                Some(img) if t.disc_minus().two_torsion_characteristics().contains(&img) => 0,
                _ => 1,
            };
            (plus, minus)
        }
    };

    // The 2-adic determinant invariant, from the per-surface derivations:
    // zero wherever defined, except that the glued type takes the value of
    // delta_phi.
    let eps_value = if ellipsoid { g.delta_phi() } else { 0 };
    let epsilon_plus = (delta_phi_s_plus == 0).then_some(eps_value);
    let epsilon_minus = (delta_phi_s_minus == 0).then_some(eps_value);

    Ok(DerivedInvariants {
        a_h_plus,
        a_h_minus,
        a_gamma,
        a_h,
        delta_h_plus,
        delta_h_minus,
        delta_h: cls.delta,
        k_rho: cls.k,
        mu_rho: cls.mu,
        sigma_rho: cls.sigma_mod8,
        c_v,
        delta_phi_s_plus,
        delta_phi_s_minus,
        epsilon_plus,
        epsilon_minus,
    })
}

/// Ok = all clauses hold; Err names the first violated clause.
pub type CheckResult = Result<(), &'static str>;

fn md8(x: i64) -> i64 {
    x.rem_euclid(8)
}

/// Lift of `c_v` (defined mod 4) into the mod-8 boundary congruences,
/// using the representatives {-1, 0, 1, 2} the per-surface derivations
/// use.
fn c_v_lift(c_v: u8) -> i64 {
    match c_v % 4 {
        0 => 0,
        1 => 1,
        2 => 2,
        _ => -1,
    }
}

/// The generic engine: evaluates the numbered existence conditions on the
/// derived invariants.
pub fn check_generic(g: &GenusInvariant) -> Result<CheckResult, Error> {
    let d = derived_invariants(g)?;
    Ok(check_generic_with(g, &d))
}

fn check_generic_with(g: &GenusInvariant, d: &DerivedInvariants) -> CheckResult {
    let t = g.fixture();
    let (r, a) = (g.r as i64, g.a as i64);
    let s = t.s_rank() as i64;
    let p = t.p_rank() as i64;
    let l_plus = t.l_plus() as i64;
    let l_minus = t.l_minus() as i64;
    let a_h = d.a_h as i64;
    let k = d.k_rho as i64;
    let sigma = d.sigma_rho as i64;

    macro_rules! require {
        ($cond:expr, $name:literal) => {
            if !($cond) {
                return Err($name);
            }
        };
    }

    match g.tuple_type() {
        TupleType::Zero => {
            require!(d.delta_h_plus == 0 && d.delta_h_minus == 0, "1.8.1-0-H-condition");
            require!(a >= a_h + k, "1.8.1-0-inequality");
            require!((a + r) % 2 == 0, "1.8.1-0-congruence-1");
            require!((2 - r).rem_euclid(4) == 0, "1.8.1-0-congruence-2");
            if a == a_h + k && d.mu_rho == 0 {
                require!(md8(2 - r) == md8(sigma), "1.8.1-0-boundary");
            }
        }
        TupleType::Ia => {
            let c_v = d.c_v.expect("Ia has v") as i64;
            require!((c_v - (a_h - k)).rem_euclid(2) == 0, "1.8.1-Ia-cv-parity");
            if d.mu_rho == 0 {
                require!((c_v - sigma).rem_euclid(4) == 0, "1.8.1-Ia-cv-sigma");
            }
            require!(a_h > 0, "1.8.1-Ia-H-nonzero");
            if d.delta_h_plus == 0 && d.delta_h_minus == 0 {
                require!(k >= 1, "1.8.1-Ia-k-positive");
                if k == 1 && d.mu_rho == 1 {
                    require!(c_v.rem_euclid(4) == 2, "1.8.1-Ia-cv-2");
                }
            }
            require!(a >= a_h + k, "1.8.1-Ia-inequality");
            require!((a + r) % 2 == 0, "1.8.1-Ia-congruence-1");
            require!((2 - r - c_v).rem_euclid(4) == 0, "1.8.1-Ia-congruence-2");
            if a == a_h + k && d.mu_rho == 0 {
                require!(md8(2 - r) == md8(sigma), "1.8.1-Ia-boundary");
            }
        }
        TupleType::Ib => {
            require!(a >= a_h + k + 1, "1.8.1-Ib-inequality");
            require!((a + r) % 2 == 0, "1.8.1-Ib-congruence");
            if a == a_h + k + 1 && d.mu_rho == 0 {
                require!(
                    md8(2 - r) == md8(sigma + 1) || md8(2 - r) == md8(sigma - 1),
                    "1.8.1-Ib-boundary-1"
                );
            }
            if a == a_h + k + 2 && d.mu_rho == 0 {
                require!(md8(2 - r) != md8(sigma + 4), "1.8.1-Ib-boundary-2");
            }
        }
    }

    // Conditions on the orthogonal-complement lattices.
    require!(p + 1 <= r && r <= 21 - s + p, "1.8.2-inequality-1");
    let lower = -2 * d.a_h_plus as i64 + p + l_plus;
    require!(r - a >= lower, "1.8.2-inequality-2");
    let upper = 2 * d.a_h_minus as i64 + p - s - l_minus + 22;
    require!(r + a <= upper, "1.8.2-inequality-3");
    if d.delta_phi_s_plus == 0 && r - a == lower {
        let rhs = 4 * d.epsilon_plus.unwrap() as i64 + c_v_lift(d.c_v.unwrap_or(0));
        require!(md8(2 - r) == md8(rhs), "1.8.2-boundary-1");
    }
    if d.delta_phi_s_minus == 0 && r + a == upper {
        let rhs = 4 * d.epsilon_minus.unwrap() as i64 + c_v_lift(d.c_v.unwrap_or(0));
        require!(md8(2 - r) == md8(rhs), "1.8.2-boundary-2");
    }
    Ok(())
}

/// The per-surface engine: evaluates the transcribed condition lists.
pub fn check_percase(g: &GenusInvariant) -> Result<CheckResult, Error> {
    let d = derived_invariants(g)?;
    Ok(check_percase_with(g, &d))
}

fn check_percase_with(g: &GenusInvariant, d: &DerivedInvariants) -> CheckResult {
    let (r, a) = (g.r as i64, g.a as i64);
    match g.surface {
        Surface::P2 => percase_p2(g, r, a),
        Surface::Hyperboloid => percase_hyperboloid(g, d, r, a),
        Surface::Ellipsoid => percase_ellipsoid(g, r, a),
        Surface::F1 => percase_f1(g, d, r, a),
        Surface::F4 => percase_f4(g, r, a),
    }
}

fn percase_p2(g: &GenusInvariant, r: i64, a: i64) -> CheckResult {
    let delta_h: i64 = if g.h == 0 { 1 } else { 0 };
    let dps = g.delta_phi_s as i64;
    let v_is_h = matches!(&g.v, Some(v) if v == &vec![1]);
    let v_is_0 = matches!(&g.v, Some(v) if v == &vec![0]);
    if !(1..=20).contains(&r) {
        return Err("p2-r-range");
    }
    if a < 1 - delta_h + dps {
        return Err("p2-a-lower");
    }
    if a > r {
        return Err("p2-a-upper");
    }
    if r + a > 22 - 2 * delta_h {
        return Err("p2-ra-upper");
    }
    if (r + a) % 2 != 0 {
        return Err("p2-parity");
    }
    if dps == 0 && delta_h == 1 && !(v_is_0 && (2 - r).rem_euclid(4) == 0) {
        return Err("p2-congruence-v0");
    }
    if dps == 0 && delta_h == 0 && !(v_is_h && (2 - r + 1).rem_euclid(4) == 0) {
        return Err("p2-congruence-vh");
    }
    if a == 1 - delta_h && v_is_0 && md8(2 - r) != 0 {
        return Err("p2-bd-a-min-v0");
    }
    if a == 1 - delta_h && v_is_h && md8(2 - r) != md8(-1) {
        return Err("p2-bd-a-min-vh");
    }
    if a == 2 - delta_h && dps == 1 {
        let base = -1 + delta_h;
        if md8(2 - r) != md8(base + 1) && md8(2 - r) != md8(base - 1) {
            return Err("p2-bd-Ib-1");
        }
    }
    if a == 3 - delta_h && dps == 1 && md8(2 - r) == md8(-1 + delta_h + 4) {
        return Err("p2-bd-Ib-2");
    }
    if a == r && v_is_0 && md8(2 - r) != 0 {
        return Err("p2-bd-a-eq-r");
    }
    if r + a == 22 - 2 * delta_h && v_is_h && md8(2 - r) != md8(-1) {
        return Err("p2-bd-ra-max");
    }
    Ok(())
}

fn percase_hyperboloid(g: &GenusInvariant, d: &DerivedInvariants, r: i64, a: i64) -> CheckResult {
    let a_h = d.a_h as i64;
    let k = d.k_rho as i64;
    match g.tuple_type() {
        TupleType::Zero => {
            if a < a_h + k || a > r {
                return Err("hyperbo-0-a-range");
            }
            if a % 2 != 0 {
                return Err("hyperbo-0-a-even");
            }
            if !(2..=18).contains(&r) || (2 - r).rem_euclid(4) != 0 {
                return Err("hyperbo-0-r");
            }
            if r + a > 2 * a_h + 18 {
                return Err("hyperbo-0-ra-upper");
            }
            if a == a_h + k && d.mu_rho == 0 && md8(2 - r) != 0 {
                return Err("hyperbo-0-bd-a-min");
            }
            if a == r && md8(2 - r) != 0 {
                return Err("hyperbo-0-bd-a-eq-r");
            }
            if r + a == 2 * a_h + 18 && md8(2 - r) != 0 {
                return Err("hyperbo-0-bd-ra-max");
            }
            Ok(())
        }
        TupleType::Ia => {
            if a_h != 1 || k != 1 {
                return Err("hyperbo-Ia-H");
            }
            let c_v = d.c_v.expect("Ia has v") as i64;
            let want = if d.mu_rho == 0 { 0 } else { 2 };
            if c_v.rem_euclid(4) != want {
                return Err("hyperbo-Ia-cv");
            }
            if !(2..=18).contains(&r) || (2 - r - c_v).rem_euclid(4) != 0 {
                return Err("hyperbo-Ia-r");
            }
            if a < 2 || a > r || a % 2 != 0 {
                return Err("hyperbo-Ia-a");
            }
            if r + a > 20 {
                return Err("hyperbo-Ia-ra-upper");
            }
            if a == 2 && d.mu_rho == 0 && md8(2 - r) != 0 {
                return Err("hyperbo-Ia-bd");
            }
            Ok(())
        }
        TupleType::Ib => {
            if a < a_h + k + 1 || a > r {
                return Err("hyperbo-Ib-a-range");
            }
            if !(1..=19).contains(&r) {
                return Err("hyperbo-Ib-r-range");
            }
            if (r + a) % 2 != 0 {
                return Err("hyperbo-Ib-parity");
            }
            if r + a > 2 * a_h + 18 {
                return Err("hyperbo-Ib-ra-upper");
            }
            if a == a_h + k + 1 && d.mu_rho == 0 && md8(2 - r) != 1 && md8(2 - r) != 7 {
                return Err("hyperbo-Ib-bd-1");
            }
            if a == a_h + k + 2 && d.mu_rho == 0 && md8(2 - r) == 4 {
                return Err("hyperbo-Ib-bd-2");
            }
            Ok(())
        }
    }
}

fn percase_ellipsoid(g: &GenusInvariant, r: i64, a: i64) -> CheckResult {
    match g.tuple_type() {
        TupleType::Zero => {
            if a < 2 || a > r || a % 2 != 0 {
                return Err("ell-0-a");
            }
            if (2 - r).rem_euclid(4) != 0 || !(2..=18).contains(&r) {
                return Err("ell-0-r");
            }
            if r + a > 22 {
                return Err("ell-0-ra-upper");
            }
            if a == r && !((r, a) == (2, 2) || (r, a) == (10, 10)) {
                return Err("ell-0-bd-a-eq-r");
            }
            if r + a == 22 && (r, a) != (18, 4) {
                return Err("ell-0-bd-ra-max");
            }
            Ok(())
        }
        TupleType::Ia => {
            if a < 2 || a > r || a % 2 != 0 {
                return Err("ell-Ia-a");
            }
            if (r - 4).rem_euclid(4) != 0 || !(4..=20).contains(&r) {
                return Err("ell-Ia-r");
            }
            if r + a > 22 {
                return Err("ell-Ia-ra-upper");
            }
            if a == r && (r, a) != (4, 4) {
                return Err("ell-Ia-bd-a-eq-r");
            }
            if r + a == 22 && !((r, a) == (20, 2) || (r, a) == (12, 10)) {
                return Err("ell-Ia-bd-ra-max");
            }
            Ok(())
        }
        TupleType::Ib => {
            if a < 3 || a > r {
                return Err("ell-Ib-a");
            }
            if (r + a) % 2 != 0 {
                return Err("ell-Ib-parity");
            }
            if !(2..=20).contains(&r) {
                return Err("ell-Ib-r-range");
            }
            if r + a > 22 {
                return Err("ell-Ib-ra-upper");
            }
            Ok(())
        }
    }
}

fn percase_f1(g: &GenusInvariant, d: &DerivedInvariants, r: i64, a: i64) -> CheckResult {
    let a_h = d.a_h as i64;
    let k = d.k_rho as i64;
    let sigma = d.sigma_rho as i64;
    let name = g.h_name();
    let v_is_he = matches!(&g.v, Some(v) if v == &vec![1, 1]);
    match g.tuple_type() {
        TupleType::Zero => {
            if !(name == "0" || name == "[h+e]") {
                return Err("f1-0-H");
            }
            if (2 - r).rem_euclid(4) != 0 || !(2..=18).contains(&r) {
                return Err("f1-0-r");
            }
            if a % 2 != 0 || a > r {
                return Err("f1-0-a");
            }
            if r + a > 2 * a_h + 18 {
                return Err("f1-0-ra-upper");
            }
            if name == "[h+e]" && a < 2 {
                return Err("f1-0-a-lower");
            }
            if name == "0" && a == 0 && md8(2 - r) != 0 {
                return Err("f1-0-bd-a0");
            }
            if name == "[h+e]" && a == 2 && md8(2 - r) != 0 {
                return Err("f1-0-bd-a2");
            }
            if a == r && md8(2 - r) != 0 {
                return Err("f1-0-bd-a-eq-r");
            }
            Ok(())
        }
        TupleType::Ia => {
            if a_h < 1 {
                return Err("f1-Ia-H-nonzero");
            }
            let c_v = d.c_v.expect("Ia has v") as i64;
            if (c_v - sigma).rem_euclid(4) != 0 {
                return Err("f1-Ia-cv-sigma");
            }
            match name {
                // The figure and the related-involution pairing put five
                // residues r = 3 mod 4 here, not the four the running text
                // lists.
                "[h]" => {
                    if a < 1 || a % 2 != 1 || (r - 3).rem_euclid(4) != 0 {
                        return Err("f1-Ia-h");
                    }
                }
                "[e]" => {
                    if a < 1 || a % 2 != 1 || (r - 1).rem_euclid(4) != 0 {
                        return Err("f1-Ia-e");
                    }
                }
                "[h+e]" | "S/2S" => {
                    if a < 2 || a % 2 != 0 || (r - 2).rem_euclid(4) != 0 {
                        return Err("f1-Ia-he-s2s");
                    }
                }
                _ => return Err("f1-Ia-H"),
            }
            if (name == "[h]" || name == "[e]") && a == 1 && md8(2 - r) != md8(sigma) {
                return Err("f1-Ia-bd-a1");
            }
            if (name == "[h+e]" || name == "S/2S") && a == 2 && md8(2 - r) != 0 {
                return Err("f1-Ia-bd-a2");
            }
            if a > r {
                return Err("f1-Ia-a-upper");
            }
            if r + a > 2 * a_h + 18 {
                return Err("f1-Ia-ra-upper");
            }
            if v_is_he
                && (name == "[h+e]" || name == "S/2S")
                && r + a == 2 * a_h + 18
                && md8(2 - r) != 0
            {
                return Err("f1-Ia-bd-ra-max");
            }
            Ok(())
        }
        TupleType::Ib => {
            if a < a_h + k + 1 {
                return Err("f1-Ib-a-lower");
            }
            if (r + a) % 2 != 0 {
                return Err("f1-Ib-parity");
            }
            if a == a_h + k + 1
                && md8(2 - r) != md8(sigma + 1)
                && md8(2 - r) != md8(sigma - 1)
            {
                return Err("f1-Ib-bd-1");
            }
            if a == a_h + k + 2 && md8(2 - r) == md8(sigma + 4) {
                return Err("f1-Ib-bd-2");
            }
            if !(1..=19).contains(&r) {
                return Err("f1-Ib-r-range");
            }
            if a > r {
                return Err("f1-Ib-a-upper");
            }
            if r + a > 2 * a_h + 18 {
                return Err("f1-Ib-ra-upper");
            }
            Ok(())
        }
    }
}

fn percase_f4(g: &GenusInvariant, r: i64, a: i64) -> CheckResult {
    if g.delta_phi() == 0 {
        if (2 - r).rem_euclid(4) != 0 || !(2..=18).contains(&r) {
            return Err("f4-0-r");
        }
        if a % 2 != 0 || a > r {
            return Err("f4-0-a");
        }
        if r + a > 20 {
            return Err("f4-0-ra-upper");
        }
        if (a == 0 || a == r || r + a == 20) && md8(2 - r) != 0 {
            return Err("f4-0-bd");
        }
        Ok(())
    } else {
        if a < 1 {
            return Err("f4-1-a-lower");
        }
        if (r + a) % 2 != 0 {
            return Err("f4-1-parity");
        }
        if !(1..=19).contains(&r) {
            return Err("f4-1-r-range");
        }
        if a > r {
            return Err("f4-1-a-upper");
        }
        if r + a > 20 {
            return Err("f4-1-ra-upper");
        }
        if a == 1 && md8(2 - r) != 1 && md8(2 - r) != 7 {
            return Err("f4-1-bd-1");
        }
        if a == 2 && md8(2 - r) == 4 {
            return Err("f4-1-bd-2");
        }
        Ok(())
    }
}

/// Which condition engine to run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Engine {
    Generic,
    PerCase,
}

impl Engine {
    pub fn parse(s: &str) -> Result<Engine, Error> {
        match s.to_ascii_lowercase().as_str() {
            "generic" => Ok(Engine::Generic),
            "percase" => Ok(Engine::PerCase),
            other => Err(Error::InvalidTuple(format!("unknown engine {other}"))),
        }
    }
}

/// Image of a tuple under the order-2 generator of G, when nontrivial.
fn g_image(g: &GenusInvariant) -> Option<GenusInvariant> {
    let t = g.fixture();
    let m = t.g_generator.as_ref()?;
    let rank = t.s_rank();
    let map_bits = |v: &[u8]| -> Vec<u8> {
        let x: Vec<i64> = v.iter().map(|&b| b as i64).collect();
        matrix::mat_vec(m, &x)
            .iter()
            .map(|&c| (c.rem_euclid(2)) as u8)
            .collect()
    };
    // Map the subgroup: find the catalog entry with the same element set.
    let elems: BTreeSet<Vec<u8>> = t
        .subgroup(g.h)
        .elements(rank)
        .into_iter()
        .map(|e| map_bits(&e))
        .collect();
    let h2 = t
        .subgroups
        .iter()
        .position(|s| s.elements(rank).into_iter().collect::<BTreeSet<_>>() == elems)
        .expect("G permutes the catalog");
    Some(GenusInvariant {
        surface: g.surface,
        h: h2,
        r: g.r,
        a: g.a,
        delta_phi_s: g.delta_phi_s,
        v: g.v.as_ref().map(|v| map_bits(v)),
    })
}

/// Canonical representative of the G-orbit of a tuple.
pub fn canonicalize(g: &GenusInvariant) -> GenusInvariant {
    match g_image(g) {
        Some(img) if img < *g => img,
        _ => g.clone(),
    }
}

/// The full G-orbit of a tuple (length 1 or 2).
pub fn orbit(g: &GenusInvariant) -> Vec<GenusInvariant> {
    match g_image(g) {
        Some(img) if img != *g => vec![g.clone(), img],
        _ => vec![g.clone()],
    }
}

fn thread_budget() -> usize {
    let cap = std::env::var("K3CENSUS_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(usize::MAX);
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(cap)
        .max(1)
}

/// Enumerate the complete census of a surface with the chosen engine:
/// all tuples passing every condition, deduplicated under G, in canonical
/// order.
pub fn enumerate(surface: Surface, engine: Engine) -> Result<Vec<GenusInvariant>, Error> {
    let t = make_type(surface);
    // Candidate (h, delta_phiS, v) cells; r and a are scanned inside.
    let mut cells: Vec<(usize, u8, Option<Vec<u8>>)> = Vec::new();
    for h in 0..t.subgroups.len() {
        cells.push((h, 1, None));
        for v in characteristic_vs(t, h)? {
            cells.push((h, 0, Some(v)));
        }
    }

    let workers = thread_budget().min(cells.len().max(1));
    let mut results: Vec<GenusInvariant> = if workers <= 1 {
        let mut out = Vec::new();
        for cell in &cells {
            scan_cell(surface, engine, cell, &mut out)?;
        }
        out
    } else {
        let chunks: Vec<&[(usize, u8, Option<Vec<u8>>)]> =
            cells.chunks(cells.len().div_ceil(workers)).collect();
        let parts: Vec<Result<Vec<GenusInvariant>, Error>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    scope.spawn(move || {
                        let mut out = Vec::new();
                        for cell in chunk {
                            scan_cell(surface, engine, cell, &mut out)?;
                        }
                        Ok(out)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("census worker")).collect()
        });
        let mut out = Vec::new();
        for p in parts {
            out.extend(p?);
        }
        out
    };

    // Deduplicate under G and sort canonically.
    results = results
        .into_iter()
        .filter(|g| canonicalize(g) == *g)
        .collect();
    results.sort();
    results.dedup();
    Ok(results)
}

fn scan_cell(
    surface: Surface,
    engine: Engine,
    cell: &(usize, u8, Option<Vec<u8>>),
    out: &mut Vec<GenusInvariant>,
) -> Result<(), Error> {
    let (h, dps, v) = cell;
    // The derived invariants do not depend on (r, a); compute them once.
    let probe = GenusInvariant {
        surface,
        h: *h,
        r: 1,
        a: 0,
        delta_phi_s: *dps,
        v: v.clone(),
    };
    let d = derived_invariants(&probe)?;
    for r in 1..=20u8 {
        for a in 0..=22u8 {
            let g = GenusInvariant {
                surface,
                h: *h,
                r,
                a,
                delta_phi_s: *dps,
                v: v.clone(),
            };
            let outcome = match engine {
                Engine::Generic => check_generic_with(&g, &d),
                Engine::PerCase => check_percase_with(&g, &d),
            };
            if outcome.is_ok() {
                out.push(g);
            }
        }
    }
    Ok(())
}

static CENSUSES: OnceLock<BTreeMap<Surface, Vec<GenusInvariant>>> = OnceLock::new();

/// The cached census of a surface (generic engine; both engines agree).
pub fn census_for(surface: Surface) -> &'static [GenusInvariant] {
    let all = CENSUSES.get_or_init(|| {
        Surface::ALL
            .iter()
            .map(|&s| (s, enumerate(s, Engine::Generic).expect("fixture census")))
            .collect()
    });
    &all[&surface]
}

/// The tuple of the related involution.
pub fn related(g: &GenusInvariant) -> Result<GenusInvariant, Error> {
    g.validate()?;
    let t = g.fixture();
    let d = derived_invariants(g)?;
    let s = t.s_rank() as i64;
    let p = t.p_rank() as i64;
    let r2 = (22 - s + 2 * p) - g.r as i64;
    let h2 = perp_subgroup(t, g.h)?;
    let a_h2 = t.subgroup(h2).gens.len() as i64;
    let a2 = g.a as i64 - d.a_h as i64 + a_h2;
    if !(0..=22).contains(&a2) || !(1..=20).contains(&r2) {
        return Err(Error::InvalidTuple(format!(
            "related tuple out of range: r'={r2}, a'={a2}"
        )));
    }
    let s_theta = t.s_theta_bits();
    let v2 = g.v.as_ref().map(|v| {
        v.iter()
            .zip(&s_theta)
            .map(|(&a, &b)| (a + b) % 2)
            .collect::<Vec<u8>>()
    });
    Ok(GenusInvariant {
        surface: g.surface,
        h: h2,
        r: r2 as u8,
        a: a2 as u8,
        delta_phi_s: g.delta_phi_s,
        v: v2,
    })
}

/// The catalog index of the orthogonal complement of H with respect to
/// the discriminant pairing on `A_{S-}`.
fn perp_subgroup(t: &SThetaType, h_idx: usize) -> Result<usize, Error> {
    if t.surface == Surface::Ellipsoid || t.surface == Surface::F4 {
        // A single catalog entry; it is its own complement.
        return Ok(h_idx);
    }
    let disc = t.disc_minus();
    let rank = t.s_rank();
    let image_set = |idx: usize| -> BTreeSet<Vec<u8>> {
        t.subgroup(idx)
            .elements(rank)
            .iter()
            .map(|e| t.image_in_minus(e).expect("catalog halves into dual"))
            .collect()
    };
    let h_imgs = image_set(h_idx);
    let perp: BTreeSet<Vec<u8>> = disc
        .two_torsion()
        .into_iter()
        .filter(|x| h_imgs.iter().all(|y| disc.form.b(x, y).is_zero()))
        .collect();
    t.subgroups
        .iter()
        .enumerate()
        .find(|(i, _)| image_set(*i) == perp)
        .map(|(i, _)| i)
        .ok_or_else(|| Error::SubgroupNotInCatalog("orthogonal complement".into()))
}

/// Pairs and fixed points of the related-involution map on a census.
#[derive(Debug)]
pub struct RelatedClasses {
    pub pairs: Vec<(GenusInvariant, GenusInvariant)>,
    pub fixed: Vec<GenusInvariant>,
}

impl RelatedClasses {
    pub fn class_count(&self) -> usize {
        self.pairs.len() + self.fixed.len()
    }
}

pub fn identify_related(census: &[GenusInvariant]) -> Result<RelatedClasses, Error> {
    let set: BTreeSet<&GenusInvariant> = census.iter().collect();
    let mut seen: BTreeSet<&GenusInvariant> = BTreeSet::new();
    let mut pairs = Vec::new();
    let mut fixed = Vec::new();
    for g in census {
        if seen.contains(g) {
            continue;
        }
        let partner = canonicalize(&related(g)?);
        match set.get(&partner) {
            None => {
                return Err(Error::RelatedMissing(format!("{g:?} -> {partner:?}")));
            }
            Some(&p) => {
                seen.insert(g);
                if p == g {
                    fixed.push(g.clone());
                } else {
                    seen.insert(p);
                    pairs.push((g.clone(), p.clone()));
                }
            }
        }
    }
    Ok(RelatedClasses { pairs, fixed })
}

/// Whether the genus invariants alone pin down the isomorphism class,
/// by the sufficient conditions on the complement lattices, the
/// 2-elementary criterion, or the worked-out glued case.
pub fn uniqueness_flag(g: &GenusInvariant) -> bool {
    let t = g.fixture();
    // 2-elementary discriminant groups on both sides decide it at once.
    let plus_two_elem = t.disc_plus().map_or(true, |d| {
        d.form.orders().iter().all(|&o| o == 2)
    });
    let minus_two_elem = t.disc_minus().form.orders().iter().all(|&o| o == 2);
    if plus_two_elem && minus_two_elem {
        return true;
    }
    let (b_plus, b_minus) = b_conditions(g);
    if b_plus && b_minus {
        return true;
    }
    // For the glued type the class is worked out case by case: the genus
    // always determines it.
    g.surface == Surface::Ellipsoid
}

/// The two sufficient conditions on the complement lattices.
pub fn b_conditions(g: &GenusInvariant) -> (bool, bool) {
    let t = g.fixture();
    let d = derived_invariants(g).expect("valid tuple");
    let (r, a) = (g.r as i64, g.a as i64);
    let s = t.s_rank() as i64;
    let p = t.p_rank() as i64;

    let bound_plus = -2 * d.a_h_plus as i64 + p + t.l_plus() as i64;
    let kappa_plus = t.kappa_plus() as i64;
    let b_plus = r - a > bound_plus
        || (r - a == bound_plus && a >= 2 * d.a_h_plus as i64 - kappa_plus + 3)
        || (r - a == bound_plus
            && a == 2 * d.a_h_plus as i64 - kappa_plus + 2
            && d.delta_phi_s_plus == 0);

    let bound_minus = 2 * d.a_h_minus as i64 + p - s - t.l_minus() as i64 + 22;
    let kappa_minus = t.kappa_minus() as i64;
    let b_minus = r + a < bound_minus
        || (r + a == bound_minus && a >= 2 * d.a_h_minus as i64 - kappa_minus + 3)
        || (r + a == bound_minus
            && a == 2 * d.a_h_minus as i64 - kappa_minus + 2
            && d.delta_phi_s_minus == 0);

    (b_plus, b_minus)
}
