//! Even integral lattices, their discriminant quadratic forms, (-4)-root
//! enumeration, and the five fixed involution types on lattices of rank
//! at most 2 that drive the census.

use crate::error::Error;
use crate::matrix::{self, Mat};
use crate::qform::{BValue, FiniteQuadraticForm, QValue};
use std::fmt;
use std::sync::OnceLock;

/// An even nondegenerate integral lattice, stored by its gram matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvenLattice {
    gram: Mat,
}

impl EvenLattice {
    pub fn new(gram: Mat) -> Result<EvenLattice, Error> {
        if !matrix::is_symmetric(&gram) {
            return Err(Error::InvalidGram("not symmetric".into()));
        }
        if gram.iter().enumerate().any(|(i, row)| row[i] % 2 != 0) {
            return Err(Error::InvalidGram("diagonal not even".into()));
        }
        if !gram.is_empty() && matrix::determinant(&gram) == 0 {
            return Err(Error::InvalidGram("degenerate".into()));
        }
        Ok(EvenLattice { gram })
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn det(&self) -> i64 {
        matrix::determinant(&self.gram)
    }

    /// `(n_plus, n_minus)`.
    pub fn signature(&self) -> (usize, usize) {
        matrix::signature(&self.gram)
    }

    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        matrix::mat_vec(&self.gram, y)
            .iter()
            .zip(x)
            .map(|(&gy, &xi)| xi * gy)
            .sum()
    }

    pub fn norm(&self, x: &[i64]) -> i64 {
        self.inner(x, x)
    }

    /// Gram matrix of the sublattice spanned by the given vectors.
    pub fn sub_gram(&self, basis: &[Vec<i64>]) -> Mat {
        basis
            .iter()
            .map(|x| basis.iter().map(|y| self.inner(x, y)).collect())
            .collect()
    }

    /// The discriminant group `S*/S` with its quadratic form `q(x) = x^2
    /// mod 2`, via Smith normal form of the gram matrix.
    pub fn discriminant_form(&self) -> Result<DiscriminantForm, Error> {
        let n = self.rank();
        let (d, u, v) = matrix::smith_normal_form(&self.gram);
        for &di in &d {
            if !matches!(di, 1 | 2 | 4 | 8) {
                return Err(Error::UnsupportedInvariantFactor(di));
            }
        }
        // Generators V e_i / d_i for the nontrivial factors.
        let mut orders = Vec::new();
        let mut gens: Vec<(Vec<i64>, i64)> = Vec::new();
        for i in 0..n {
            if d[i] > 1 {
                orders.push(d[i]);
                gens.push(((0..n).map(|r| v[r][i]).collect(), d[i]));
            }
        }
        let mut q_gen = Vec::new();
        let mut b_gen = vec![vec![BValue::ZERO; gens.len()]; gens.len()];
        for (i, (gi, di)) in gens.iter().enumerate() {
            q_gen.push(reduce_q(self.inner(gi, gi), di * di)?);
            for (j, (gj, dj)) in gens.iter().enumerate() {
                b_gen[i][j] = reduce_b(self.inner(gi, gj), di * dj)?;
            }
        }
        let form = FiniteQuadraticForm::new(
            orders.iter().map(|&d| d as u8).collect(),
            q_gen,
            b_gen,
        )?;
        let ug = matrix::mat_mul(&u, &self.gram);
        Ok(DiscriminantForm { form, orders, ug, gens })
    }

    /// `(r, a, delta)` for a 2-elementary lattice.
    pub fn invariants(&self) -> Result<(usize, usize, u8), Error> {
        let disc = self.discriminant_form()?;
        if let Some(&bad) = disc.orders.iter().find(|&&d| d != 2) {
            return Err(Error::UnsupportedInvariantFactor(bad));
        }
        let a = disc.orders.len();
        let delta = if disc
            .form
            .elements()
            .any(|x| !disc.form.q(&x).is_integral())
        {
            1
        } else {
            0
        };
        Ok((self.rank(), a, delta))
    }
}

fn reduce_q(num: i64, den: i64) -> Result<QValue, Error> {
    let g = gcd(num, den);
    let (num, den) = if g > 1 { (num / g, den / g) } else { (num, den) };
    if 8 % den != 0 {
        return Err(Error::UnsupportedInvariantFactor(den));
    }
    QValue::new(num, den)
}

fn reduce_b(num: i64, den: i64) -> Result<BValue, Error> {
    let g = gcd(num, den);
    let (num, den) = if g > 1 { (num / g, den / g) } else { (num, den) };
    if 8 % den != 0 {
        return Err(Error::UnsupportedInvariantFactor(den));
    }
    BValue::new(num, den)
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

/// Discriminant group of a lattice together with the coordinate map from
/// rational vectors to coset coordinates.
#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    pub form: FiniteQuadraticForm,
    orders: Vec<i64>,
    ug: Mat,
    /// Generator lifts: numerator vector in the lattice basis over the
    /// paired denominator.
    gens: Vec<(Vec<i64>, i64)>,
}

impl DiscriminantForm {
    /// Minimal number of generators of the group.
    pub fn min_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn generator_lifts(&self) -> &[(Vec<i64>, i64)] {
        &self.gens
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    /// Number of Z/2 factors among the invariant factors.
    pub fn two_torsion_factor_count(&self) -> usize {
        self.orders.iter().filter(|&&d| d == 2).count()
    }

    /// Coset coordinates of `num/den` as an element of `S*/S`, or `None`
    /// when the vector does not lie in the dual lattice.
    pub fn coords(&self, num: &[i64], den: i64) -> Option<Vec<u8>> {
        let m = matrix::mat_vec(&self.ug, num);
        if m.iter().any(|&x| x % den != 0) {
            return None;
        }
        let full: Vec<i64> = m.iter().map(|&x| x / den).collect();
        // Entries for trivial invariant factors must be dropped; they are
        // integers, hence zero in the quotient.
        let mut coords = Vec::with_capacity(self.orders.len());
        let mut oi = 0;
        for (i, &d) in full_orders(&self.ug, &self.orders).iter().enumerate() {
            if d > 1 {
                coords.push(full[i].rem_euclid(self.orders[oi]) as u8);
                oi += 1;
            }
        }
        debug_assert_eq!(coords.len(), self.orders.len());
        Some(coords)
    }

    /// The subgroup of elements of order dividing 2, as elements of the form.
    pub fn two_torsion(&self) -> Vec<Vec<u8>> {
        self.form
            .elements()
            .filter(|x| {
                x.iter()
                    .zip(self.form.orders())
                    .all(|(&c, &d)| (2 * c as u16) % d as u16 == 0)
            })
            .collect()
    }

    /// Elements of the 2-torsion subgroup characteristic for the form
    /// restricted there: `b(x, v) = q(x) mod 1` for all 2-torsion `x`.
    pub fn two_torsion_characteristics(&self) -> Vec<Vec<u8>> {
        let tt = self.two_torsion();
        tt.iter()
            .filter(|v| {
                tt.iter()
                    .all(|x| self.form.b(x, v) == self.form.q(x).mod_one())
            })
            .cloned()
            .collect()
    }
}

// Reconstructs which positions of the full SNF diagonal are nontrivial.
// Trivial factors occupy the leading positions in SNF order, so the
// nontrivial ones sit at rank - orders.len() .. rank.
fn full_orders(ug: &Mat, orders: &[i64]) -> Vec<i64> {
    let rank = ug.len();
    let trivial = rank - orders.len();
    let mut out = vec![1i64; rank];
    for (i, &d) in orders.iter().enumerate() {
        out[trivial + i] = d;
    }
    out
}

/// All vectors of square -4 in the sublattice spanned by `sub_basis` that
/// pair evenly with the whole ambient lattice.
pub fn roots_minus4(sub_basis: &[Vec<i64>], ambient: &EvenLattice) -> Result<Vec<Vec<i64>>, Error> {
    let gram = ambient.sub_gram(sub_basis);
    let coeffs = solve_norm_minus4(&gram)?;
    let n = ambient.rank();
    let mut out = Vec::new();
    for c in coeffs {
        let mut alpha = vec![0i64; n];
        for (ci, b) in c.iter().zip(sub_basis) {
            for (ai, bi) in alpha.iter_mut().zip(b) {
                *ai += ci * bi;
            }
        }
        let pairs_even = (0..n).all(|j| {
            let e: Vec<i64> = (0..n).map(|t| i64::from(t == j)).collect();
            ambient.inner(&alpha, &e) % 2 == 0
        });
        if pairs_even {
            out.push(alpha);
        }
    }
    out.sort();
    Ok(out)
}

/// Integer solutions of `x^T G x = -4` for small gram matrices.
fn solve_norm_minus4(gram: &Mat) -> Result<Vec<Vec<i64>>, Error> {
    let n = gram.len();
    match n {
        0 => Ok(vec![]),
        1 => {
            let g = gram[0][0];
            let mut out = Vec::new();
            if g < 0 && (-4) % g == 0 {
                let c2 = -4 / g;
                let c = isqrt(c2);
                if c > 0 && c * c == c2 {
                    out.push(vec![-c]);
                    out.push(vec![c]);
                }
            }
            Ok(out)
        }
        2 => solve_norm_minus4_rank2(gram),
        _ => {
            let (plus, _minus) = matrix::signature(gram);
            if plus == 0 {
                Ok(enumerate_definite(gram))
            } else {
                Err(Error::RootSearchUnsupported(format!(
                    "indefinite gram of rank {n}"
                )))
            }
        }
    }
}

fn solve_norm_minus4_rank2(gram: &Mat) -> Result<Vec<Vec<i64>>, Error> {
    let (g11, g12, g22) = (gram[0][0], gram[0][1], gram[1][1]);
    let det = matrix::determinant(gram);
    let (plus, _) = matrix::signature(gram);
    if det > 0 {
        if plus == 2 {
            return Ok(vec![]); // positive definite: -4 not represented
        }
        return Ok(enumerate_definite(gram));
    }
    // Indefinite rank 2. The shapes arising from the fixture lattices have
    // finitely many solutions that fall out of a factorization.
    let mut out = Vec::new();
    if g11 == 0 && g22 == 0 {
        // 2 g12 x y = -4
        if (-4) % (2 * g12) == 0 {
            let t = -4 / (2 * g12);
            for x in divisors_signed(t) {
                out.push(vec![x, t / x]);
            }
        }
        out.sort();
        return Ok(out);
    }
    if g12 == 0 && g11 == -g22 && g11 != 0 {
        // g11 (x^2 - y^2) = -4
        if (-4) % g11 == 0 {
            let t = -4 / g11;
            for dd in divisors_signed(t) {
                let ee = t / dd;
                if (dd + ee) % 2 == 0 {
                    out.push(vec![(dd + ee) / 2, (ee - dd) / 2]);
                }
            }
        }
        out.sort();
        out.dedup();
        return Ok(out);
    }
    if g11 == 0 && g12 != 0 {
        // y (2 g12 x + g22 y) = -4
        for y in divisors_signed(-4) {
            let rest = -4 / y - g22 * y;
            if rest % (2 * g12) == 0 {
                out.push(vec![rest / (2 * g12), y]);
            }
        }
        out.sort();
        out.dedup();
        return Ok(out);
    }
    if g22 == 0 && g12 != 0 {
        for x in divisors_signed(-4) {
            let rest = -4 / x - g11 * x;
            if rest % (2 * g12) == 0 {
                out.push(vec![x, rest / (2 * g12)]);
            }
        }
        out.sort();
        out.dedup();
        return Ok(out);
    }
    Err(Error::RootSearchUnsupported(format!(
        "indefinite rank-2 gram [[{g11},{g12}],[{g12},{g22}]]"
    )))
}

fn divisors_signed(t: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let a = t.abs();
    for d in 1..=a {
        if a % d == 0 {
            out.push(d);
            out.push(-d);
        }
    }
    out
}

/// Box enumeration of `x^T G x = -4` for negative definite G: each
/// coordinate is bounded by `x_i^2 <= 4 * (P^-1)_ii` where `P = -G`.
fn enumerate_definite(gram: &Mat) -> Vec<Vec<i64>> {
    let n = gram.len();
    let p: Mat = gram
        .iter()
        .map(|row| row.iter().map(|&x| -x).collect())
        .collect();
    let det = matrix::determinant(&p);
    debug_assert!(det > 0);
    let bounds: Vec<i64> = (0..n)
        .map(|i| {
            let minor: Mat = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| p[r][c]).collect())
                .collect();
            isqrt(4 * matrix::determinant(&minor) / det)
        })
        .collect();
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    for i in 0..n {
        x[i] = -bounds[i];
    }
    loop {
        let norm: i64 = (0..n)
            .map(|i| (0..n).map(|j| x[i] * gram[i][j] * x[j]).sum::<i64>())
            .sum();
        if norm == -4 {
            out.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            x[i] += 1;
            if x[i] <= bounds[i] {
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}

fn isqrt(n: i64) -> i64 {
    debug_assert!(n >= 0);
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// The five surfaces whose curve moduli the census covers.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Surface {
    P2,
    Hyperboloid,
    Ellipsoid,
    F1,
    F4,
}

impl Surface {
    pub const ALL: [Surface; 5] = [
        Surface::P2,
        Surface::Hyperboloid,
        Surface::Ellipsoid,
        Surface::F1,
        Surface::F4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Surface::P2 => "p2",
            Surface::Hyperboloid => "hyperboloid",
            Surface::Ellipsoid => "ellipsoid",
            Surface::F1 => "f1",
            Surface::F4 => "f4",
        }
    }

    pub fn parse(s: &str) -> Result<Surface, Error> {
        match s.to_ascii_lowercase().as_str() {
            "p2" => Ok(Surface::P2),
            "hyperboloid" | "h" => Ok(Surface::Hyperboloid),
            "ellipsoid" | "e" => Ok(Surface::Ellipsoid),
            "f1" => Ok(Surface::F1),
            "f4" => Ok(Surface::F4),
            other => Err(Error::UnknownSurface(other.into())),
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// An admissible subgroup `H` of `S/2S` from a fixture's catalog.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub name: &'static str,
    /// Generators as integer vectors in the S basis (read mod 2S).
    pub gens: Vec<Vec<i64>>,
}

impl Subgroup {
    /// All elements of the subgroup, as 0/1 vectors in the S basis.
    pub fn elements(&self, rank: usize) -> Vec<Vec<u8>> {
        let mut out = vec![vec![0u8; rank]];
        for g in &self.gens {
            let additions: Vec<Vec<u8>> = out
                .iter()
                .map(|x| {
                    x.iter()
                        .zip(g)
                        .map(|(&a, &b)| (a + (b.rem_euclid(2) as u8)) % 2)
                        .collect()
                })
                .collect();
            out.extend(additions);
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn contains(&self, rank: usize, v: &[u8]) -> bool {
        self.elements(rank).iter().any(|e| e == v)
    }
}

/// One of the five fixed condition types: the lattice `S` with the
/// involution, the eigenlattice bases, the reflection group data and the
/// admissible subgroup catalog.
pub struct SThetaType {
    pub surface: Surface,
    pub s: EvenLattice,
    pub basis_names: Vec<&'static str>,
    pub theta: Mat,
    pub s_plus_basis: Vec<Vec<i64>>,
    pub s_minus_basis: Vec<Vec<i64>>,
    pub subgroups: Vec<Subgroup>,
    /// Generator of the group G when nontrivial: a basis permutation of S.
    pub g_generator: Option<Mat>,
    disc_plus: Option<DiscriminantForm>,
    disc_minus: Option<DiscriminantForm>,
    disc_s: DiscriminantForm,
    s_theta: Vec<u8>,
}

impl SThetaType {
    fn build(surface: Surface) -> SThetaType {
        let (gram, names, theta, plus, minus, subgroups): (
            Mat,
            Vec<&'static str>,
            Mat,
            Vec<Vec<i64>>,
            Vec<Vec<i64>>,
            Vec<Subgroup>,
        ) = match surface {
            Surface::P2 => (
                vec![vec![2]],
                vec!["h"],
                vec![vec![-1]],
                vec![],
                vec![vec![1]],
                vec![
                    Subgroup { name: "0", gens: vec![] },
                    Subgroup { name: "[h]", gens: vec![vec![1]] },
                ],
            ),
            Surface::Hyperboloid => (
                vec![vec![0, 2], vec![2, 0]],
                vec!["e1", "e2"],
                vec![vec![-1, 0], vec![0, -1]],
                vec![],
                vec![vec![1, 0], vec![0, 1]],
                vec![
                    Subgroup { name: "0", gens: vec![] },
                    Subgroup { name: "[e1]", gens: vec![vec![1, 0]] },
                    Subgroup { name: "[e2]", gens: vec![vec![0, 1]] },
                    Subgroup { name: "[e1+e2]", gens: vec![vec![1, 1]] },
                    Subgroup { name: "S/2S", gens: vec![vec![1, 0], vec![0, 1]] },
                ],
            ),
            Surface::Ellipsoid => (
                vec![vec![0, 2], vec![2, 0]],
                vec!["e1", "e2"],
                vec![vec![0, -1], vec![-1, 0]],
                vec![vec![1, -1]],
                vec![vec![1, 1]],
                vec![Subgroup { name: "[e1+e2]", gens: vec![vec![1, 1]] }],
            ),
            Surface::F1 => (
                vec![vec![2, 0], vec![0, -2]],
                vec!["h", "e"],
                vec![vec![-1, 0], vec![0, -1]],
                vec![],
                vec![vec![1, 0], vec![0, 1]],
                vec![
                    Subgroup { name: "0", gens: vec![] },
                    Subgroup { name: "[h]", gens: vec![vec![1, 0]] },
                    Subgroup { name: "[e]", gens: vec![vec![0, 1]] },
                    Subgroup { name: "[h+e]", gens: vec![vec![1, 1]] },
                    Subgroup { name: "S/2S", gens: vec![vec![1, 0], vec![0, 1]] },
                ],
            ),
            Surface::F4 => (
                vec![vec![0, 1], vec![1, -2]],
                vec!["C", "E"],
                vec![vec![-1, 0], vec![0, -1]],
                vec![],
                vec![vec![1, 0], vec![0, 1]],
                vec![Subgroup { name: "0", gens: vec![] }],
            ),
        };
        let s = EvenLattice::new(gram).expect("fixture gram");
        let g_generator = compute_group_generator(&s, &plus, &minus);
        let disc_plus = if plus.is_empty() {
            None
        } else {
            Some(
                EvenLattice::new(s.sub_gram(&plus))
                    .expect("fixture S+")
                    .discriminant_form()
                    .expect("fixture disc S+"),
            )
        };
        let disc_minus = Some(
            EvenLattice::new(s.sub_gram(&minus))
                .expect("fixture S-")
                .discriminant_form()
                .expect("fixture disc S-"),
        );
        let disc_s = s.discriminant_form().expect("fixture disc S");
        let s_theta = compute_s_theta(&s, &theta, &disc_s);
        SThetaType {
            surface,
            s,
            basis_names: names,
            theta,
            s_plus_basis: plus,
            s_minus_basis: minus,
            subgroups,
            g_generator,
            disc_plus,
            disc_minus,
            disc_s,
            s_theta,
        }
    }

    /// The characteristic element of the involution on S, as 0/1
    /// coefficients over the basis (it is defined mod 2S).
    pub fn s_theta_bits(&self) -> Vec<u8> {
        self.s_theta.clone()
    }

    pub fn disc_s(&self) -> &DiscriminantForm {
        &self.disc_s
    }

    pub fn s_rank(&self) -> usize {
        self.s.rank()
    }

    pub fn p_rank(&self) -> usize {
        self.s_plus_basis.len()
    }

    pub fn disc_minus(&self) -> &DiscriminantForm {
        self.disc_minus.as_ref().expect("S- is nonempty for all fixtures")
    }

    pub fn disc_plus(&self) -> Option<&DiscriminantForm> {
        self.disc_plus.as_ref()
    }

    /// Minimal generator counts of the discriminant groups of S+/S-.
    pub fn l_plus(&self) -> usize {
        self.disc_plus.as_ref().map_or(0, |d| d.min_generators())
    }

    pub fn l_minus(&self) -> usize {
        self.disc_minus().min_generators()
    }

    /// Z/2-factor counts of the discriminant groups (the invariant kappa).
    pub fn kappa_plus(&self) -> usize {
        self.disc_plus.as_ref().map_or(0, |d| d.two_torsion_factor_count())
    }

    pub fn kappa_minus(&self) -> usize {
        self.disc_minus().two_torsion_factor_count()
    }

    pub fn subgroup(&self, idx: usize) -> &Subgroup {
        &self.subgroups[idx]
    }

    pub fn subgroup_index(&self, name: &str) -> Result<usize, Error> {
        self.subgroups
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| Error::SubgroupNotInCatalog(name.into()))
    }

    /// 2-rank of the glue group between the projections of 2S into S+/S-.
    pub fn a_gamma(&self) -> usize {
        if self.s_plus_basis.is_empty() {
            return 0;
        }
        // Projections (x + theta x)/2 of the standard basis vectors of 2S.
        let n = self.s_rank();
        let mut masks: Vec<u32> = Vec::new();
        for i in 0..n {
            let e: Vec<i64> = (0..n).map(|t| 2 * i64::from(t == i)).collect();
            let te = matrix::mat_vec(&self.theta, &e);
            let proj: Vec<i64> = e.iter().zip(&te).map(|(&a, &b)| (a + b) / 2).collect();
            // Express in S+ coordinates mod 2S+ (rank <= 1 in scope).
            if let Some(c) = solve_in_span(&self.s_plus_basis, &proj) {
                let mask = c.iter().enumerate().fold(0u32, |m, (k, &ck)| {
                    m | (((ck.rem_euclid(2)) as u32) << k)
                });
                if mask != 0 {
                    masks.push(mask);
                }
            }
        }
        f2_rank(&masks)
    }

    /// The finite quadratic form `q_rho` carried by a catalog subgroup,
    /// with one form generator per subgroup generator.
    pub fn q_rho(&self, h_idx: usize) -> Result<FiniteQuadraticForm, Error> {
        let sub = &self.subgroups[h_idx];
        if sub.gens.is_empty() {
            return Ok(FiniteQuadraticForm::trivial());
        }
        if self.surface == Surface::Ellipsoid {
            // The glued generator (e1-e2, 0) = (0, e1+e2); evaluate on the
            // S+ side where the coset is (e1-e2)/2.
            let disc = self.disc_plus().expect("ellipsoid has S+");
            let gen = disc
                .coords(&[1], 2)
                .ok_or_else(|| Error::InvalidTuple("glued generator not in dual".into()))?;
            return disc.form.subform_on(&[gen]);
        }
        // S- = S for the other four types; q_rho = -q_{S-} restricted.
        let disc = self.disc_minus();
        let gens: Vec<Vec<u8>> = sub
            .gens
            .iter()
            .map(|g| {
                disc.coords(g, 2)
                    .ok_or_else(|| Error::InvalidTuple(format!("{:?}/2 not in dual", g)))
            })
            .collect::<Result<_, _>>()?;
        Ok(negate_form(&disc.form.subform_on(&gens)?))
    }

    /// Image of a subgroup element (0/1 vector over the S basis) inside the
    /// 2-torsion of `A_{S-}`, when the vector halves into the dual.
    pub fn image_in_minus(&self, v: &[u8]) -> Option<Vec<u8>> {
        let vec: Vec<i64> = v.iter().map(|&b| b as i64).collect();
        if self.surface == Surface::Ellipsoid {
            // Project to the S- component: v is 0 or e1+e2, which lies in S-.
            let c = solve_in_span(&self.s_minus_basis, &vec)?;
            return self.disc_minus().coords(&c, 2);
        }
        self.disc_minus().coords(&vec, 2)
    }

    pub fn image_in_plus(&self, v: &[u8]) -> Option<Vec<u8>> {
        let disc = self.disc_plus()?;
        if self.surface == Surface::Ellipsoid {
            // v = e1+e2 is glued to e1-e2 in S+; v = 0 maps to 0.
            if v.iter().all(|&b| b == 0) {
                return disc.coords(&[0], 2);
            }
            return disc.coords(&[1], 2);
        }
        None
    }

    /// Membership of an S-vector in 2 S-.
    pub fn in_double_minus(&self, vec: &[i64]) -> bool {
        let doubled: Vec<Vec<i64>> = self
            .s_minus_basis
            .iter()
            .map(|b| b.iter().map(|&x| 2 * x).collect())
            .collect();
        solve_in_span(&doubled, vec).is_some()
    }
}

fn negate_form(f: &FiniteQuadraticForm) -> FiniteQuadraticForm {
    let orders = f.orders().to_vec();
    let q_gen: Vec<QValue> = (0..f.rank())
        .map(|i| {
            let mut e = f.zero_element();
            e[i] = 1;
            QValue::new(-(f.q(&e).num16() as i64), 8).expect("negate")
        })
        .collect();
    let b_gen: Vec<Vec<BValue>> = (0..f.rank())
        .map(|i| {
            (0..f.rank())
                .map(|j| {
                    let (mut ei, mut ej) = (f.zero_element(), f.zero_element());
                    ei[i] = 1;
                    ej[j] = 1;
                    BValue::new(-(f.b(&ei, &ej).num8() as i64), 8).expect("negate")
                })
                .collect()
        })
        .collect();
    FiniteQuadraticForm::new(orders, q_gen, b_gen).expect("negated form")
}

/// Solve `sum c_i basis_i = target` over the integers, for independent
/// basis vectors, by exact fraction-free elimination.
fn solve_in_span(basis: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    if basis.is_empty() {
        return if target.iter().all(|&x| x == 0) {
            Some(vec![])
        } else {
            None
        };
    }
    let n = target.len();
    let k = basis.len();
    // Augmented system [B | t] with one column per basis vector.
    let mut m: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row: Vec<i128> = (0..k).map(|j| basis[j][i] as i128).collect();
            row.push(target[i] as i128);
            row
        })
        .collect();
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..n).find(|&r| m[r][col] != 0) else {
            return None; // dependent basis is out of scope here
        };
        m.swap(row, p);
        for r in 0..n {
            if r != row && m[r][col] != 0 {
                let (a, b) = (m[row][col], m[r][col]);
                for c in 0..=k {
                    m[r][c] = m[r][c] * a - m[row][c] * b;
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    // Rows without pivots must have vanished.
    if (row..n).any(|r| m[r][k] != 0) {
        return None;
    }
    let mut out = Vec::with_capacity(k);
    for (col, &r) in pivot_rows.iter().enumerate() {
        let (num, den) = (m[r][k], m[r][col]);
        if num % den != 0 {
            return None;
        }
        out.push((num / den) as i64);
    }
    Some(out)
}

fn f2_rank(masks: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &m in masks {
        let mut v = m;
        for &b in &basis {
            let pivot = 1u32 << (31 - b.leading_zeros());
            if v & pivot != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
        }
    }
    basis.len()
}

/// The element `s` of `S` (mod 2S) with `2(x, theta(x)) = (x, s) mod 2`
/// for every `x` in the dual lattice. Exactly one 0/1 coefficient pattern
/// satisfies this for each fixture.
fn compute_s_theta(s: &EvenLattice, theta: &Mat, disc: &DiscriminantForm) -> Vec<u8> {
    let n = s.rank();
    // Representatives of S*/2S over the fixed denominator 8.
    let mut reps: Vec<Vec<i64>> = vec![vec![0; n]];
    for (gen, d) in disc.generator_lifts() {
        let mut next = Vec::new();
        for c in 0..*d {
            for base in &reps {
                let mut num = base.clone();
                for (ni, &gi) in num.iter_mut().zip(gen) {
                    *ni += c * (8 / d) * gi;
                }
                next.push(num);
            }
        }
        reps = next;
    }
    for j in 0..n {
        let mut next = Vec::new();
        for b in 0..2i64 {
            for base in &reps {
                let mut num = base.clone();
                num[j] += 8 * b;
                next.push(num);
            }
        }
        reps = next;
    }

    let mut found: Vec<Vec<u8>> = Vec::new();
    for mask in 0..(1u32 << n) {
        let cand: Vec<i64> = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
        let ok = reps.iter().all(|num| {
            let theta_num = matrix::mat_vec(theta, num);
            let lhs: i64 = num
                .iter()
                .zip(matrix::mat_vec(s.gram(), &theta_num))
                .map(|(&a, b)| a * b)
                .sum();
            let rhs: i64 = num
                .iter()
                .zip(matrix::mat_vec(s.gram(), &cand))
                .map(|(&a, b)| a * b)
                .sum();
            (lhs - 4 * rhs).rem_euclid(64) == 0
        });
        if ok {
            found.push(cand.iter().map(|&c| c as u8).collect());
        }
    }
    assert_eq!(found.len(), 1, "characteristic element of theta must be unique mod 2S");
    found.pop().unwrap()
}

/// Reflections in the (-4)-roots of S+ and S-; for the fixtures this group
/// is trivial or swaps the two basis vectors.
fn compute_group_generator(
    s: &EvenLattice,
    plus: &[Vec<i64>],
    minus: &[Vec<i64>],
) -> Option<Mat> {
    let mut roots = roots_minus4(plus, s).expect("fixture root search");
    roots.extend(roots_minus4(minus, s).expect("fixture root search"));
    let n = s.rank();
    for alpha in &roots {
        // s_alpha(x) = x + (x, alpha)/2 * alpha for alpha^2 = -4.
        let mut m = matrix::identity(n);
        for j in 0..n {
            let e: Vec<i64> = (0..n).map(|t| i64::from(t == j)).collect();
            let coef = s.inner(&e, alpha) / 2;
            for i in 0..n {
                m[i][j] += coef * alpha[i];
            }
        }
        if m != matrix::identity(n) {
            return Some(m);
        }
    }
    None
}

/// Order and named action of the group G of a fixture.
pub struct GroupG {
    pub order: usize,
    pub generator: Option<Mat>,
}

pub fn group_g(t: &SThetaType) -> GroupG {
    match &t.g_generator {
        None => GroupG { order: 1, generator: None },
        Some(m) => GroupG { order: 2, generator: Some(m.clone()) },
    }
}

static FIXTURES: OnceLock<Vec<SThetaType>> = OnceLock::new();

/// The fixture for a surface.
pub fn make_type(surface: Surface) -> &'static SThetaType {
    let all = FIXTURES.get_or_init(|| Surface::ALL.iter().map(|&s| SThetaType::build(s)).collect());
    all.iter().find(|t| t.surface == surface).expect("all surfaces built")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u2() -> EvenLattice {
        EvenLattice::new(vec![vec![0, 2], vec![2, 0]]).unwrap()
    }

    #[test]
    fn discriminant_of_u2_is_u_plus() {
        let disc = u2().discriminant_form().unwrap();
        assert_eq!(disc.form.orders(), &[2, 2]);
        let c = disc.form.classify().unwrap();
        assert_eq!((c.rank_a, c.k, c.mu, c.sigma_mod8, c.delta), (2, 0, 0, 0, 0));
        let u = crate::qform::elementary_form(crate::qform::ElementaryForm::UPlus2).unwrap();
        assert!(disc.form.is_isomorphic(&u).unwrap());
    }

    #[test]
    fn discriminant_of_minus4() {
        let l = EvenLattice::new(vec![vec![-4]]).unwrap();
        let disc = l.discriminant_form().unwrap();
        assert_eq!(disc.form.orders(), &[4]);
        let gen = vec![1u8];
        assert_eq!(disc.form.q(&gen), QValue::new(-1, 4).unwrap());
    }

    #[test]
    fn discriminant_of_unimodular_is_trivial() {
        let l = EvenLattice::new(vec![vec![0, 1], vec![1, -2]]).unwrap();
        let disc = l.discriminant_form().unwrap();
        assert_eq!(disc.form.rank(), 0);
    }

    #[test]
    fn lattice_invariants_examples() {
        let two = EvenLattice::new(vec![vec![2]]).unwrap();
        assert_eq!(two.invariants().unwrap(), (1, 1, 1));
        assert_eq!(u2().invariants().unwrap(), (2, 2, 0));
        let u = EvenLattice::new(vec![vec![0, 1], vec![1, -2]]).unwrap();
        assert_eq!(u.invariants().unwrap(), (2, 0, 0));
        let m4 = EvenLattice::new(vec![vec![-4]]).unwrap();
        assert_eq!(m4.invariants(), Err(Error::UnsupportedInvariantFactor(4)));
    }

    #[test]
    fn roots_of_fixtures() {
        // Hyperboloid: S- = S = U(2) has exactly +-(e1 - e2).
        let t = make_type(Surface::Hyperboloid);
        let roots = roots_minus4(&t.s_minus_basis, &t.s).unwrap();
        assert_eq!(roots, vec![vec![-1, 1], vec![1, -1]]);
        // Ellipsoid: S+ has the same pair, S- none.
        let t = make_type(Surface::Ellipsoid);
        assert_eq!(
            roots_minus4(&t.s_plus_basis, &t.s).unwrap(),
            vec![vec![-1, 1], vec![1, -1]]
        );
        assert!(roots_minus4(&t.s_minus_basis, &t.s).unwrap().is_empty());
        // F1 and F4: empty on both sides.
        for s in [Surface::F1, Surface::F4] {
            let t = make_type(s);
            assert!(roots_minus4(&t.s_minus_basis, &t.s).unwrap().is_empty());
            assert!(roots_minus4(&t.s_plus_basis, &t.s).unwrap().is_empty());
        }
        // P2: no (-4) vectors at all.
        let t = make_type(Surface::P2);
        assert!(roots_minus4(&t.s_minus_basis, &t.s).unwrap().is_empty());
    }

    #[test]
    fn roots_in_definite_rank3() {
        let l = EvenLattice::new(vec![
            vec![-4, 0, 0],
            vec![0, -2, 0],
            vec![0, 0, -2],
        ])
        .unwrap();
        let basis = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let roots = roots_minus4(&basis, &l).unwrap();
        assert_eq!(
            roots,
            vec![
                vec![-1, 0, 0],
                vec![0, -1, -1],
                vec![0, -1, 1],
                vec![0, 1, -1],
                vec![0, 1, 1],
                vec![1, 0, 0],
            ]
        );
    }

    #[test]
    fn roots_rejected_for_indefinite_rank3() {
        let l = EvenLattice::new(vec![
            vec![2, 0, 0],
            vec![0, -2, 0],
            vec![0, 0, -2],
        ])
        .unwrap();
        let basis = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert!(matches!(
            roots_minus4(&basis, &l),
            Err(Error::RootSearchUnsupported(_))
        ));
    }

    #[test]
    fn group_g_orders() {
        assert_eq!(group_g(make_type(Surface::P2)).order, 1);
        assert_eq!(group_g(make_type(Surface::F1)).order, 1);
        assert_eq!(group_g(make_type(Surface::F4)).order, 1);
        let g = group_g(make_type(Surface::Hyperboloid));
        assert_eq!(g.order, 2);
        // The generator swaps e1 and e2.
        assert_eq!(g.generator.unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(group_g(make_type(Surface::Ellipsoid)).order, 2);
    }

    #[test]
    fn fixture_axioms() {
        for surface in Surface::ALL {
            let t = make_type(surface);
            let n = t.s_rank();
            // theta is an involution preserving the form.
            assert_eq!(matrix::mat_mul(&t.theta, &t.theta), matrix::identity(n));
            let tgt = matrix::mat_mul(
                &matrix::transpose(&t.theta),
                &matrix::mat_mul(t.s.gram(), &t.theta),
            );
            assert_eq!(&tgt, t.s.gram());
            // Eigenlattices are orthogonal and fill the rank.
            for x in &t.s_plus_basis {
                for y in &t.s_minus_basis {
                    assert_eq!(t.s.inner(x, y), 0);
                }
            }
            assert_eq!(t.s_plus_basis.len() + t.s_minus_basis.len(), n);
            // S+ negative definite without square -2 vectors.
            if !t.s_plus_basis.is_empty() {
                let sub = t.s.sub_gram(&t.s_plus_basis);
                let (pl, mi) = matrix::signature(&sub);
                assert_eq!((pl, mi), (0, t.s_plus_basis.len()));
                assert_ne!(sub[0][0], -2);
            }
        }
    }

    #[test]
    fn q_rho_matches_catalog_forms() {
        use crate::qform::{elementary_form, sum_of, ElementaryForm::*};
        let t = make_type(Surface::Hyperboloid);
        let z = elementary_form(Z).unwrap();
        let w = elementary_form(W).unwrap();
        assert!(t.q_rho(1).unwrap().is_isomorphic(&z).unwrap());
        assert!(t.q_rho(2).unwrap().is_isomorphic(&z).unwrap());
        assert!(t.q_rho(3).unwrap().is_isomorphic(&w).unwrap());
        let u = elementary_form(UPlus2).unwrap();
        assert!(t.q_rho(4).unwrap().is_isomorphic(&u).unwrap());

        let t = make_type(Surface::Ellipsoid);
        assert!(t.q_rho(0).unwrap().is_isomorphic(&w).unwrap());

        let t = make_type(Surface::F1);
        let qp = elementary_form(QAlpha { alpha: 1, k: 1 }).unwrap();
        let qm = elementary_form(QAlpha { alpha: -1, k: 1 }).unwrap();
        assert!(t.q_rho(1).unwrap().is_isomorphic(&qm).unwrap());
        assert!(t.q_rho(2).unwrap().is_isomorphic(&qp).unwrap());
        assert!(t.q_rho(3).unwrap().is_isomorphic(&z).unwrap());
        let qq = sum_of(&[QAlpha { alpha: 1, k: 1 }, QAlpha { alpha: -1, k: 1 }]).unwrap();
        assert!(t.q_rho(4).unwrap().is_isomorphic(&qq).unwrap());

        let t = make_type(Surface::P2);
        assert!(t.q_rho(1).unwrap().is_isomorphic(&qm).unwrap());
    }

    #[test]
    fn q_rho_radical_data_per_fixture() {
        // [h+e] carries the zero form on Z/2; the glued subgroup carries
        // the nonzero one.
        let t = make_type(Surface::F1);
        let (k, mu, nd) = t.q_rho(3).unwrap().radical_decompose().unwrap();
        assert_eq!((k, mu, nd.rank()), (1, 0, 0));
        let t = make_type(Surface::Ellipsoid);
        let (k, mu, nd) = t.q_rho(0).unwrap().radical_decompose().unwrap();
        assert_eq!((k, mu, nd.rank()), (1, 1, 0));
    }

    #[test]
    fn s_theta_values() {
        assert_eq!(make_type(Surface::P2).s_theta_bits(), vec![1]);
        assert_eq!(make_type(Surface::Hyperboloid).s_theta_bits(), vec![0, 0]);
        assert_eq!(make_type(Surface::Ellipsoid).s_theta_bits(), vec![1, 1]);
        assert_eq!(make_type(Surface::F1).s_theta_bits(), vec![1, 1]);
        assert_eq!(make_type(Surface::F4).s_theta_bits(), vec![0, 0]);
    }

    #[test]
    fn gamma_ranks() {
        assert_eq!(make_type(Surface::P2).a_gamma(), 0);
        assert_eq!(make_type(Surface::Hyperboloid).a_gamma(), 0);
        assert_eq!(make_type(Surface::Ellipsoid).a_gamma(), 1);
        assert_eq!(make_type(Surface::F1).a_gamma(), 0);
        assert_eq!(make_type(Surface::F4).a_gamma(), 0);
    }

    #[test]
    fn subgroup_ranges() {
        // Every catalog subgroup is theta-stable and halves into the dual.
        for surface in Surface::ALL {
            let t = make_type(surface);
            for sub in &t.subgroups {
                for g in &sub.gens {
                    let tg = matrix::mat_vec(&t.theta, g);
                    let diff: Vec<i64> = g.iter().zip(&tg).map(|(&a, &b)| a - b).collect();
                    assert!(diff.iter().all(|&x| x % 2 == 0));
                    let bits: Vec<u8> = g.iter().map(|&x| (x.rem_euclid(2)) as u8).collect();
                    assert!(
                        t.image_in_minus(&bits).is_some() || t.image_in_plus(&bits).is_some()
                    );
                }
            }
        }
    }
}
