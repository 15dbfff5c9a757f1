//! Disk-model Schottky groups: side-pairing Möbius generators over disjoint
//! half-disks orthogonal to the unit circle, the induced coding of the limit
//! set by reduced symbol sequences, and the orbital / geometric Birkhoff
//! weights that drive the exponent estimates.
//!
//! Unit-determinant disk isometries are kept in the form
//! [[a, b], [conj b, conj a]] with |a|^2 - |b|^2 = 1, acting by
//! z ↦ (a z + b) / (conj(b) z + conj(a)). For such a map,
//! d_h(0, M·0) = 2 log(|a| + |b|) exactly, which is what the orbit
//! enumeration uses per node.

pub mod orbit;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::escape::BirkhoffWeight;
use crate::extension::Projection;
use crate::symbolic::{PotentialSpec, SftSystem, Sym};

/// Geometric tolerance for the constructor invariants.
pub const GEOMETRY_TOL: f64 = 1e-9;

/// A unit-determinant orientation-preserving isometry of the disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
    };

    /// Hyperbolic translation along the real axis moving the origin to
    /// tanh(d/2).
    pub fn translation(d: f64) -> Mobius {
        Mobius {
            a: Complex64::new((d / 2.0).cosh(), 0.0),
            b: Complex64::new((d / 2.0).sinh(), 0.0),
        }
    }

    /// Rotation by θ about the origin.
    pub fn rotation(theta: f64) -> Mobius {
        Mobius {
            a: Complex64::from_polar(1.0, theta / 2.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    /// |M'(z)| = 1 / |conj(b) z + conj(a)|^2.
    pub fn derivative_norm(&self, z: Complex64) -> f64 {
        let den = self.b.conj() * z + self.a.conj();
        1.0 / den.norm_sqr()
    }

    pub fn compose(&self, rhs: &Mobius) -> Mobius {
        let a = self.a * rhs.a + self.b * rhs.b.conj();
        let b = self.a * rhs.b + self.b * rhs.a.conj();
        // renormalize the determinant to damp drift along long products
        let det = a.norm_sqr() - b.norm_sqr();
        let scale = 1.0 / det.sqrt();
        Mobius {
            a: a * scale,
            b: b * scale,
        }
    }

    /// Composition without the determinant renormalization; the drift over
    /// the sweep depths used here stays far below the histogram bin width.
    #[inline]
    pub fn compose_fast(&self, rhs: &Mobius) -> Mobius {
        Mobius {
            a: self.a * rhs.a + self.b * rhs.b.conj(),
            b: self.a * rhs.b + self.b * rhs.a.conj(),
        }
    }

    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    /// d_h(0, M·0) = 2 log(|a| + |b|).
    pub fn origin_distance(&self) -> f64 {
        2.0 * (self.a.norm() + self.b.norm()).ln()
    }

    /// Deviation of M N from the identity, min over the ±Id ambiguity.
    pub fn identity_defect(&self, other: &Mobius) -> f64 {
        let m = self.compose(other);
        let plus = (m.a - Complex64::new(1.0, 0.0)).norm() + m.b.norm();
        let minus = (m.a + Complex64::new(1.0, 0.0)).norm() + m.b.norm();
        plus.min(minus)
    }
}

/// The hyperbolic metric of the open unit disk.
pub fn hyperbolic_distance(z: Complex64, w: Complex64) -> Result<f64> {
    if z.norm() >= 1.0 || w.norm() >= 1.0 {
        return Err(Error::Geometry("hyperbolic distance needs points inside the disk".into()));
    }
    let t = ((z - w) / (Complex64::new(1.0, 0.0) - z.conj() * w)).norm();
    Ok(((1.0 + t) / (1.0 - t)).ln())
}

/// A Euclidean circle orthogonal to the unit circle; its inner disk is the
/// half-plane ℋ bounded by the geodesic it cuts.
#[derive(Clone, Copy, Debug)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    /// |center|^2 = 1 + radius^2 up to tolerance.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.center.norm_sqr() - 1.0 - self.radius * self.radius).abs()
    }

    /// Half-width of the boundary arc cut on the unit circle:
    /// cos α = 1/|center|.
    pub fn arc_half_width(&self) -> f64 {
        (1.0 / self.center.norm()).acos()
    }

    pub fn direction(&self) -> f64 {
        self.center.arg()
    }

    /// The arc endpoints on the unit circle, counterclockwise last.
    pub fn arc_endpoints(&self) -> (Complex64, Complex64) {
        let theta = self.direction();
        let alpha = self.arc_half_width();
        (
            Complex64::from_polar(1.0, theta - alpha),
            Complex64::from_polar(1.0, theta + alpha),
        )
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

/// A Schottky group: an even alphabet of side-pairing generators over
/// pairwise disjoint orthogonal circles, paired by a fixed-point-free
/// involution, with generator a and generator ā mutually inverse.
#[derive(Clone, Debug)]
pub struct SchottkyGroup {
    names: Vec<String>,
    circles: Vec<Circle>,
    pairing: Vec<Sym>,
    generators: Vec<Mobius>,
}

impl SchottkyGroup {
    /// Validates the geometry and constructs the side-pairing generators.
    /// The generator for symbol a is M_a ∘ (z ↦ -z) ∘ M_ā^{-1}, where M_c
    /// moves the standard diameter geodesic onto the circle of c; it maps
    /// the half-disk of ā onto the closed complement of the half-disk of a.
    pub fn new(names: Vec<String>, circles: Vec<Circle>, pairing: Vec<Sym>) -> Result<Self> {
        let n = names.len();
        if n < 6 || n % 2 != 0 {
            return Err(Error::Geometry(format!(
                "schottky alphabet must be even and at least 6 symbols, got {n}"
            )));
        }
        if circles.len() != n || pairing.len() != n {
            return Err(Error::Geometry("circles/pairing length mismatch".into()));
        }
        for (i, &j) in pairing.iter().enumerate() {
            if j as usize >= n || pairing[j as usize] as usize != i || j as usize == i {
                return Err(Error::Geometry(format!(
                    "pairing is not a fixed-point-free involution at symbol {i}"
                )));
            }
        }
        for (i, c) in circles.iter().enumerate() {
            if c.orthogonality_defect() > GEOMETRY_TOL {
                return Err(Error::Geometry(format!(
                    "circle `{}` is not orthogonal to the unit circle (defect {:.3e})",
                    names[i],
                    c.orthogonality_defect()
                )));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let gap = (circles[i].center - circles[j].center).norm()
                    - circles[i].radius
                    - circles[j].radius;
                if gap <= GEOMETRY_TOL {
                    return Err(Error::Geometry(format!(
                        "closed disks `{}` and `{}` are not disjoint (gap {:.3e})",
                        names[i], names[j], gap
                    )));
                }
            }
        }

        let side_map = |c: &Circle| -> Mobius {
            let q = c.center.norm() - c.radius;
            let d = 2.0 * q.atanh();
            Mobius::rotation(c.direction()).compose(&Mobius::translation(d))
        };
        let half_turn = Mobius::rotation(std::f64::consts::PI);
        let mut generators = Vec::with_capacity(n);
        for a in 0..n {
            let abar = pairing[a] as usize;
            let g = side_map(&circles[a])
                .compose(&half_turn)
                .compose(&side_map(&circles[abar]).inverse());
            generators.push(g);
        }

        let group = SchottkyGroup {
            names,
            circles,
            pairing,
            generators,
        };
        group.check_side_pairing()?;
        Ok(group)
    }

    /// A rotationally symmetric group: 2·`pairs` circles of equal radius at
    /// angles π j / pairs, paired antipodally (j <-> j + pairs).
    pub fn symmetric(pairs: usize, radius: f64) -> Result<SchottkyGroup> {
        let n = 2 * pairs;
        let s = (1.0 + radius * radius).sqrt();
        let names = (0..n)
            .map(|j| {
                if j < pairs {
                    format!("s{}", j + 1)
                } else {
                    format!("S{}", j - pairs + 1)
                }
            })
            .collect();
        let circles = (0..n)
            .map(|j| Circle {
                center: Complex64::from_polar(s, std::f64::consts::PI * j as f64 / pairs as f64),
                radius,
            })
            .collect();
        let pairing = (0..n).map(|j| ((j + pairs) % n) as Sym).collect();
        SchottkyGroup::new(names, circles, pairing)
    }

    /// The symmetric group sized by its boundary-arc half-width (radians):
    /// radius = tan(α), valid while the closed disks stay disjoint.
    pub fn symmetric_by_arc(pairs: usize, half_width: f64) -> Result<SchottkyGroup> {
        SchottkyGroup::symmetric(pairs, half_width.tan())
    }

    fn check_side_pairing(&self) -> Result<()> {
        for a in 0..self.len() {
            let abar = self.pair(a as Sym) as usize;
            // mutually inverse generators
            let defect = self.generators[a].identity_defect(&self.generators[abar]);
            if defect > 1e-10 {
                return Err(Error::Geometry(format!(
                    "generators `{}` and `{}` are not mutually inverse (defect {:.3e})",
                    self.names[a], self.names[abar], defect
                )));
            }
            // the generator maps the boundary circle of ā onto the boundary
            // circle of a, and the inside of ℋ_ā strictly outside ℋ_a
            let g = &self.generators[a];
            let cb = &self.circles[abar];
            let ca = &self.circles[a];
            for k in 0..16 {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
                let z = cb.center + Complex64::from_polar(cb.radius, angle);
                if z.norm() >= 1.0 {
                    continue;
                }
                let w = g.apply(z);
                let err = ((w - ca.center).norm() - ca.radius).abs();
                if err > GEOMETRY_TOL {
                    return Err(Error::Geometry(format!(
                        "generator `{}` does not pair the circles (error {:.3e})",
                        self.names[a], err
                    )));
                }
            }
            let inner = cb.center * (1.0 - 0.5 * cb.radius / cb.center.norm());
            if ca.contains(g.apply(inner)) {
                return Err(Error::Geometry(format!(
                    "generator `{}` maps its half-disk to the wrong side",
                    self.names[a]
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Free rank of the group (half the symbol count).
    pub fn rank(&self) -> usize {
        self.len() / 2
    }

    pub fn symbol_name(&self, a: Sym) -> &str {
        &self.names[a as usize]
    }

    pub fn pair(&self, a: Sym) -> Sym {
        self.pairing[a as usize]
    }

    pub fn circle(&self, a: Sym) -> &Circle {
        &self.circles[a as usize]
    }

    pub fn generator(&self, a: Sym) -> &Mobius {
        &self.generators[a as usize]
    }

    /// The product matrix of a reduced word.
    pub fn word_matrix(&self, word: &[Sym]) -> Mobius {
        let mut m = Mobius::IDENTITY;
        for &s in word {
            m = m.compose(&self.generators[s as usize]);
        }
        m
    }

    /// d_h(0, ω·0): the orbital Birkhoff surrogate.
    pub fn orbital_birkhoff(&self, word: &[Sym]) -> f64 {
        self.word_matrix(word).origin_distance()
    }

    /// The coding shift: reduced sequences over the symbols (a may not be
    /// followed by ā). The embedded potential is the constant 1; series over
    /// the coding use the orbital or geometric weights instead.
    pub fn coding(&self) -> Result<LimitCoding> {
        let n = self.len();
        let forbidden: Vec<(usize, usize)> = (0..n).map(|a| (a, self.pairing[a] as usize)).collect();
        let system = SftSystem::new(
            self.names.clone(),
            &forbidden,
            false,
            PotentialSpec::constant(n, 1.0),
        )?;
        // q_c = c(antipode of I_ā's midpoint). The antipode lies outside
        // ℋ_ā (arcs have half-width < π/2), so its image lies strictly
        // inside I_c; the arc endpoints themselves are unusable as
        // representatives because the side-pairing derivative equals one
        // there exactly.
        let mut rep_points = Vec::with_capacity(n);
        let mut rep_steps = Vec::with_capacity(n);
        for c in 0..n {
            let cbar = self.pairing[c] as usize;
            let base = -Complex64::from_polar(1.0, self.circles[cbar].direction());
            let q = self.generators[c].apply(base);
            let kappa = self.generators[self.pairing[c] as usize].derivative_norm(q).ln();
            rep_points.push(q);
            rep_steps.push(kappa);
        }
        Ok(LimitCoding {
            group: self.clone(),
            system,
            rep_points,
            rep_steps,
        })
    }
}

/// The Bowen–Series style coding of the limit set: the reduced-sequence SFT
/// together with the nested boundary arcs I_ω and the geometric potential
/// data at the arc representative points.
#[derive(Clone, Debug)]
pub struct LimitCoding {
    group: SchottkyGroup,
    system: SftSystem,
    /// q_c: the image under c of the antipode of I_ā's midpoint — an
    /// interior point of I_c, the representative of cylinders ending in c.
    pub(crate) rep_points: Vec<Complex64>,
    /// κ_c = log |(c^{-1})'(q_c)| > 0: the expansion of the boundary map on
    /// its own arc at the representative point.
    pub(crate) rep_steps: Vec<f64>,
}

impl LimitCoding {
    pub fn group(&self) -> &SchottkyGroup {
        &self.group
    }

    pub fn system(&self) -> &SftSystem {
        &self.system
    }

    pub fn rep_step(&self, c: Sym) -> f64 {
        self.rep_steps[c as usize]
    }

    /// The boundary arc I_ω = (ω without its last symbol)(I_last): endpoint
    /// pair on the unit circle, counterclockwise order inherited from the
    /// base arc.
    pub fn cylinder_arc(&self, word: &[Sym]) -> Result<(Complex64, Complex64)> {
        let last = *word.last().ok_or_else(|| {
            Error::Config("cylinder arcs are defined for nonempty words".into())
        })?;
        let prefix = self.group.word_matrix(&word[..word.len() - 1]);
        let (lo, hi) = self.group.circle(last).arc_endpoints();
        Ok((prefix.apply(lo), prefix.apply(hi)))
    }

    /// Arc length of I_ω (shorter side, radians).
    pub fn arc_length(&self, word: &[Sym]) -> Result<f64> {
        let (lo, hi) = self.cylinder_arc(word)?;
        let d = (hi.arg() - lo.arg()).rem_euclid(2.0 * std::f64::consts::PI);
        Ok(d.min(2.0 * std::f64::consts::PI - d))
    }

    /// Whether the arc of `inner` sits inside the arc of `outer`.
    pub fn arc_contains(&self, outer: &[Sym], inner: &[Sym]) -> Result<bool> {
        let (olo, ohi) = self.cylinder_arc(outer)?;
        let (ilo, ihi) = self.cylinder_arc(inner)?;
        let tau = 2.0 * std::f64::consts::PI;
        let span = (ohi.arg() - olo.arg()).rem_euclid(tau);
        let a = (ilo.arg() - olo.arg()).rem_euclid(tau);
        let b = (ihi.arg() - olo.arg()).rem_euclid(tau);
        Ok(a <= span + GEOMETRY_TOL && b <= span + GEOMETRY_TOL)
    }

    /// S_ω u_0 at the representative point: log |(ω^{-1})'(z_ω)| where
    /// z_ω = ω(base point of the last symbol) lies inside I_ω.
    ///
    /// With ω = ν c the chain rule splits this as
    /// log |(c^{-1})'(q_c)| + log |(ν^{-1})'(ν(q_c))|, and the second factor
    /// is 2 log |conj(b_ν) q_c + conj(a_ν)| by unimodularity, so the value
    /// comes straight off the prefix matrix.
    pub fn geometric_birkhoff(&self, word: &[Sym]) -> Result<f64> {
        let (&last, prefix_syms) = word.split_last().ok_or_else(|| {
            Error::Config("geometric weight needs a nonempty word".into())
        })?;
        let prefix = self.group.word_matrix(prefix_syms);
        Ok(self.geometric_step(&prefix, last))
    }

    /// log |(ω^{-1})'(z_ω)| for ω = prefix · c given the prefix matrix.
    pub(crate) fn geometric_step(&self, prefix: &Mobius, c: Sym) -> f64 {
        let q = self.rep_points[c as usize];
        let den = prefix.b.conj() * q + prefix.a.conj();
        2.0 * den.norm().ln() + self.rep_steps[c as usize]
    }
}

/// The orbital weight functional for the escape construction on the coding
/// shift: exactly subadditive (triangle inequality), so the distortion
/// allowance is zero.
pub struct OrbitalWeight<'a> {
    pub coding: &'a LimitCoding,
}

impl BirkhoffWeight for OrbitalWeight<'_> {
    fn weight(&self, word: &[Sym]) -> f64 {
        self.coding.group().orbital_birkhoff(word)
    }

    fn sup_step(&self) -> f64 {
        (0..self.coding.group().len())
            .map(|a| self.coding.group().generator(a as Sym).origin_distance())
            .fold(0.0, f64::max)
    }

    fn distortion(&self) -> f64 {
        0.0
    }
}

/// The projection of the Schottky alphabet onto a lower-rank free group,
/// with the pairing-compatibility check χ(ā) = χ(a)^{-1}.
pub fn schottky_projection(
    group: &SchottkyGroup,
    rank: usize,
    images: Vec<crate::freegroup::GroupElement>,
) -> Result<Projection> {
    if images.len() != group.len() {
        return Err(Error::InvalidGroup("one image per schottky symbol required".into()));
    }
    for a in 0..group.len() {
        let abar = group.pair(a as Sym) as usize;
        if images[abar] != images[a].inverse() {
            return Err(Error::InvalidGroup(format!(
                "images of `{}` and `{}` are not mutually inverse",
                group.symbol_name(a as Sym),
                group.symbol_name(abar as Sym)
            )));
        }
    }
    Projection::new(rank, images)
}
