//! Number fields, their invariants, and the exact residue of the Dedekind
//! zeta function from the analytic class number formula.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{louboutin_upper, zimmert_lower};
use crate::error::{Error, Result};
use crate::polyfield::{factor_degrees_mod_p, DEFAULT_FACTOR_SEED, is_prime_u64, poly_discriminant, reduce, IntPoly};

/// How a residue value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidueProvenance {
    ExactClassNumberFormula,
    EstimatedFromIdealCount,
    UserSupplied,
}

/// The residue kappa_K of zeta_K at s = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residue {
    pub value: f64,
    pub provenance: ResidueProvenance,
}

impl Residue {
    pub fn new(value: f64, provenance: ResidueProvenance) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::invariant(
                "residue value > 0",
                format!("got {value}"),
            ));
        }
        Ok(Residue { value, provenance })
    }

    pub fn user_supplied(value: f64) -> Result<Self> {
        Self::new(value, ResidueProvenance::UserSupplied)
    }

    pub fn is_exact(&self) -> bool {
        self.provenance == ResidueProvenance::ExactClassNumberFormula
    }
}

/// Class number, regulator and number of roots of unity.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassData {
    pub class_number: u64,
    pub regulator: f64,
    /// Regulator exactly as written in the descriptor.
    pub regulator_text: String,
    pub roots_of_unity: u64,
}

/// Galois-structure hints. `None` means unknown.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StructureFlags {
    pub normal_over_q: Option<bool>,
    pub normal_tower: Option<bool>,
    pub quadratic_subfield: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldDescriptor {
    defining_poly: IntPoly,
    poly_disc: BigInt,
    degree: u32,
    signature: (u32, u32),
    discriminant: BigInt,
    class_number: Option<u64>,
    regulator: Option<(f64, String)>,
    roots_of_unity: Option<u64>,
    flags: StructureFlags,
    factor_seed: u64,
}

impl FieldDescriptor {
    pub fn rational() -> Self {
        FieldDescriptor {
            defining_poly: IntPoly::from_i64(&[-1, 1]),
            poly_disc: BigInt::one(),
            degree: 1,
            signature: (1, 0),
            discriminant: BigInt::one(),
            class_number: Some(1),
            regulator: Some((1.0, "1".into())),
            roots_of_unity: Some(2),
            flags: StructureFlags {
                normal_over_q: Some(true),
                normal_tower: Some(true),
                quadratic_subfield: Some(false),
            },
            factor_seed: DEFAULT_FACTOR_SEED,
        }
    }

    /// Quadratic field from a monic quadratic polynomial; no class data.
    pub fn quadratic(poly: IntPoly) -> Result<Self> {
        let raw = RawDescriptor {
            poly: poly.coeffs().iter().map(IntLit::from_big).collect(),
            ..RawDescriptor::default()
        };
        Self::from_raw(raw)
    }

    pub fn defining_poly(&self) -> &IntPoly {
        &self.defining_poly
    }

    /// `disc(defining_poly)`; differs from the field discriminant by a square.
    pub fn poly_discriminant(&self) -> &BigInt {
        &self.poly_disc
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn signature(&self) -> (u32, u32) {
        self.signature
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn abs_discriminant(&self) -> f64 {
        self.discriminant.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn flags(&self) -> StructureFlags {
        self.flags
    }

    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }

    /// Class data, or the first missing key.
    pub fn class_data(&self) -> Result<ClassData> {
        let class_number = self.class_number.ok_or(Error::MissingClassData("class_number"))?;
        let (regulator, regulator_text) = self
            .regulator
            .clone()
            .ok_or(Error::MissingClassData("regulator"))?;
        let roots_of_unity = self
            .roots_of_unity
            .ok_or(Error::MissingClassData("roots_of_unity"))?;
        Ok(ClassData {
            class_number,
            regulator,
            regulator_text,
            roots_of_unity,
        })
    }

    pub fn has_class_data(&self) -> bool {
        self.class_data().is_ok()
    }

    pub fn with_class_data(mut self, class_number: u64, regulator: &str, roots_of_unity: u64) -> Result<Self> {
        self.class_number = Some(class_number);
        self.regulator = Some((parse_regulator(regulator)?, regulator.to_string()));
        self.roots_of_unity = Some(roots_of_unity);
        validate_class_data(&self)?;
        Ok(self)
    }

    pub fn with_flags(mut self, flags: StructureFlags) -> Self {
        self.flags = flags;
        self
    }

    /// Seed for the randomized equal-degree split at primes dividing the
    /// polynomial discriminant. Factorizations do not depend on it.
    pub fn factor_seed(&self) -> u64 {
        self.factor_seed
    }

    pub fn with_factor_seed(mut self, seed: u64) -> Self {
        self.factor_seed = seed;
        self
    }

    /// Serialize back to the descriptor text format.
    pub fn to_descriptor_text(&self) -> String {
        let raw = RawDescriptor {
            poly: self.defining_poly.coeffs().iter().map(IntLit::from_big).collect(),
            degree: Some(self.degree),
            signature: Some([self.signature.0, self.signature.1]),
            discriminant: Some(IntLit::from_big(&self.discriminant)),
            class_number: self.class_number,
            regulator: self.regulator.as_ref().map(|(_, t)| t.clone()),
            roots_of_unity: self.roots_of_unity,
            normal_over_q: self.flags.normal_over_q,
            normal_tower: self.flags.normal_tower,
            quadratic_subfield: Some(Tristate::from_option(self.flags.quadratic_subfield)),
        };
        toml::to_string(&raw).expect("descriptor serializes")
    }

    fn from_raw(raw: RawDescriptor) -> Result<Self> {
        let coeffs = raw
            .poly
            .iter()
            .map(IntLit::to_big)
            .collect::<Result<Vec<_>>>()?;
        let poly = IntPoly::new(coeffs);
        if poly.is_zero() || poly.degree() == 0 {
            return Err(Error::invariant(
                "defining polynomial has degree >= 1",
                format!("poly = {poly}"),
            ));
        }
        if !poly.is_monic() {
            return Err(Error::invariant(
                "defining polynomial is monic",
                format!("leading coefficient of {poly} is not 1"),
            ));
        }
        let n = poly.degree() as u32;
        if let Some(d) = raw.degree {
            if d != n {
                return Err(Error::invariant(
                    "n_K = degree of defining_poly",
                    format!("declared degree {d}, polynomial degree {n}"),
                ));
            }
        }
        let poly_disc = poly_discriminant(&poly)?;
        if poly_disc.is_zero() {
            return Err(Error::ReducibleDefiningPolynomial(format!(
                "{poly} has a repeated factor (zero discriminant)"
            )));
        }
        let supplied_disc = raw.discriminant.as_ref().map(IntLit::to_big).transpose()?;
        let supplied_sig = raw.signature.map(|[a, b]| (a, b));

        let (discriminant, signature) = match n {
            1 => (BigInt::one(), (1, 0)),
            2 => {
                let d = fundamental_discriminant(&poly_disc)?;
                let sig = if d.is_positive() { (2, 0) } else { (0, 1) };
                (d, sig)
            }
            _ => {
                let d = supplied_disc.clone().ok_or_else(|| {
                    Error::Schema("`discriminant` is required for degree >= 3".into())
                })?;
                let sig = supplied_sig.ok_or_else(|| {
                    Error::Schema("`signature` is required for degree >= 3".into())
                })?;
                (d, sig)
            }
        };
        if let Some(d) = &supplied_disc {
            if *d != discriminant {
                return Err(Error::invariant(
                    "declared discriminant matches the field",
                    format!("declared {d}, computed {discriminant}"),
                ));
            }
        }
        if let Some(s) = supplied_sig {
            if s != signature {
                return Err(Error::invariant(
                    "declared signature matches the field",
                    format!("declared {s:?}, computed {signature:?}"),
                ));
            }
        }

        check_irreducible(&poly, &poly_disc)?;

        let mut flags = StructureFlags {
            normal_over_q: raw.normal_over_q,
            normal_tower: raw.normal_tower,
            quadratic_subfield: raw
                .quadratic_subfield
                .as_ref()
                .map(Tristate::to_option)
                .transpose()?
                .flatten(),
        };
        if n <= 2 {
            // every field of degree <= 2 is Galois over Q
            if flags.normal_over_q == Some(false) {
                return Err(Error::invariant(
                    "fields of degree <= 2 are normal",
                    "normal_over_q = false declared",
                ));
            }
            flags.normal_over_q = Some(true);
            flags.normal_tower.get_or_insert(true);
        }
        let forced_quadratic = match n {
            2 => Some(true),
            _ if n % 2 == 1 => Some(false),
            _ => None,
        };
        if let Some(forced) = forced_quadratic {
            if flags.quadratic_subfield == Some(!forced) {
                return Err(Error::invariant(
                    "quadratic subfield flag matches degree parity",
                    format!("quadratic_subfield = {} declared for degree {n}", !forced),
                ));
            }
            flags.quadratic_subfield = Some(forced);
        }
        if flags.normal_over_q == Some(true) && flags.normal_tower == Some(false) {
            return Err(Error::invariant(
                "a normal field has a normal tower",
                "normal_over_q = true but normal_tower = false",
            ));
        }

        let regulator = match raw.regulator {
            Some(t) => Some((parse_regulator(&t)?, t)),
            None => None,
        };
        let mut fd = FieldDescriptor {
            defining_poly: poly,
            poly_disc,
            degree: n,
            signature,
            discriminant,
            class_number: raw.class_number,
            regulator,
            roots_of_unity: raw.roots_of_unity,
            flags,
            factor_seed: DEFAULT_FACTOR_SEED,
        };
        if n == 1 {
            fd.class_number.get_or_insert(1);
            fd.regulator.get_or_insert((1.0, "1".into()));
            fd.roots_of_unity.get_or_insert(2);
        }
        validate_invariants(&fd)?;
        validate_class_data(&fd)?;
        Ok(fd)
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Q[x]/({}) n={} sig=({},{}) disc={}",
            self.defining_poly, self.degree, self.signature.0, self.signature.1, self.discriminant
        )
    }
}

fn validate_invariants(fd: &FieldDescriptor) -> Result<()> {
    let n = fd.degree;
    let (r1, r2) = fd.signature;
    if r1 + 2 * r2 != n {
        return Err(Error::invariant(
            "n_K = r1 + 2 r2",
            format!("signature ({r1},{r2}) vs degree {n}"),
        ));
    }
    if n >= 2 && fd.discriminant.abs() < BigInt::from(3) {
        return Err(Error::invariant(
            "|disc| >= 3 when n_K >= 2",
            format!("disc = {}", fd.discriminant),
        ));
    }
    let want_negative = r2 % 2 == 1;
    if fd.discriminant.is_negative() != want_negative {
        return Err(Error::invariant(
            "sign(disc) = (-1)^r2",
            format!("disc = {}, r2 = {r2}", fd.discriminant),
        ));
    }
    let (q, r) = fd.poly_disc.div_rem(&fd.discriminant);
    if !r.is_zero() || q.is_negative() || !is_perfect_square(&q) {
        return Err(Error::invariant(
            "disc(poly) / disc(K) is a perfect square",
            format!("disc(poly) = {}, disc(K) = {}", fd.poly_disc, fd.discriminant),
        ));
    }
    if n == 2 && !is_fundamental_discriminant(&fd.discriminant) {
        return Err(Error::invariant(
            "quadratic discriminant is fundamental",
            format!("disc = {}", fd.discriminant),
        ));
    }
    Ok(())
}

fn validate_class_data(fd: &FieldDescriptor) -> Result<()> {
    if fd.class_number == Some(0) {
        return Err(Error::invariant("h_K >= 1", "class_number = 0"));
    }
    if let Some(w) = fd.roots_of_unity {
        if w == 0 || w % 2 == 1 {
            return Err(Error::invariant(
                "w_K is a positive even integer",
                format!("roots_of_unity = {w}"),
            ));
        }
    }
    if let Some((r, t)) = &fd.regulator {
        if !(*r > 0.0 && r.is_finite()) {
            return Err(Error::invariant("R_K > 0", format!("regulator = {t}")));
        }
    }
    Ok(())
}

fn parse_regulator(text: &str) -> Result<f64> {
    let t = text.trim();
    let ok = !t.is_empty()
        && t.chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
    let v: f64 = if ok { t.parse().ok() } else { None }
        .ok_or_else(|| Error::Schema(format!("regulator `{text}` is not a decimal number")))?;
    Ok(v)
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Discriminant of Q(sqrt(d)) for a nonzero, non-square integer d.
pub fn fundamental_discriminant(d: &BigInt) -> Result<BigInt> {
    if d.is_zero() {
        return Err(Error::Domain("zero discriminant".into()));
    }
    let mag = d
        .abs()
        .to_u128()
        .ok_or_else(|| Error::Domain(format!("|{d}| too large to factor")))?;
    let mut rest = mag;
    let mut core: u128 = 1;
    let mut q: u128 = 2;
    while q * q <= rest {
        let mut e = 0;
        while rest % q == 0 {
            rest /= q;
            e += 1;
        }
        if e % 2 == 1 {
            core *= q;
        }
        q += if q == 2 { 1 } else { 2 };
    }
    core *= rest;
    let s = if d.is_negative() {
        -BigInt::from(core)
    } else {
        BigInt::from(core)
    };
    if s.is_one() {
        return Err(Error::ReducibleDefiningPolynomial(format!(
            "discriminant {d} is a perfect square"
        )));
    }
    let r = s.mod_floor(&BigInt::from(4));
    Ok(if r.is_one() { s } else { s * 4 })
}

/// Fundamental discriminant test: d = 1 mod 4 squarefree, or d = 4m with
/// m = 2, 3 mod 4 squarefree.
pub fn is_fundamental_discriminant(d: &BigInt) -> bool {
    if d.is_zero() || d.is_one() {
        return false;
    }
    let r = d.mod_floor(&BigInt::from(4));
    if r.is_one() {
        return is_squarefree(d);
    }
    if r.is_zero() {
        let m: BigInt = d / 4;
        let mr = m.mod_floor(&BigInt::from(4));
        return (mr == BigInt::from(2) || mr == BigInt::from(3)) && is_squarefree(&m);
    }
    false
}

fn is_squarefree(n: &BigInt) -> bool {
    let Some(mut m) = n.abs().to_u128() else {
        return false;
    };
    let mut q: u128 = 2;
    while q * q <= m {
        if m % q == 0 {
            m /= q;
            if m % q == 0 {
                return false;
            }
        }
        q += 1;
    }
    true
}

fn check_irreducible(poly: &IntPoly, poly_disc: &BigInt) -> Result<()> {
    let n = poly.degree();
    if n == 1 {
        return Ok(());
    }
    if let Some(r) = integer_root(poly) {
        return Err(Error::ReducibleDefiningPolynomial(format!(
            "{poly} vanishes at x = {r}"
        )));
    }
    // factor degrees k <= n/2 that some rational factorization could have
    let mut possible: Vec<bool> = (0..=n / 2).map(|k| k >= 2).collect();
    if !possible.iter().any(|&b| b) {
        return Ok(());
    }
    let mut tested = 0;
    let mut p = 2u64;
    while tested < 60 {
        p += 1;
        if !is_prime_u64(p) || (poly_disc % BigInt::from(p)).is_zero() {
            continue;
        }
        tested += 1;
        let degs: Vec<usize> = factor_degrees_mod_p(&reduce(poly, p))?
            .into_iter()
            .map(|(d, _)| d)
            .collect();
        let mut reachable = vec![false; n + 1];
        reachable[0] = true;
        for d in degs {
            for s in (d..=n).rev() {
                if reachable[s - d] {
                    reachable[s] = true;
                }
            }
        }
        for (k, slot) in possible.iter_mut().enumerate() {
            *slot = *slot && reachable[k];
        }
        if !possible.iter().any(|&b| b) {
            return Ok(());
        }
    }
    // not certified either way: irreducibility is the caller's assertion
    Ok(())
}

fn integer_root(poly: &IntPoly) -> Option<BigInt> {
    let a0 = poly.coeffs()[0].clone();
    if a0.is_zero() {
        return Some(BigInt::zero());
    }
    let mag = a0.abs().to_u64()?;
    if mag > 1_000_000_000_000 {
        return None;
    }
    let mut d = 1u64;
    while d * d <= mag {
        if mag % d == 0 {
            for c in [d, mag / d] {
                for r in [BigInt::from(c), -BigInt::from(c)] {
                    if poly.eval(&r).is_zero() {
                        return Some(r);
                    }
                }
            }
        }
        d += 1;
    }
    None
}

/// Residue from the analytic class number formula.
pub fn kappa_exact(field: &FieldDescriptor) -> Result<Residue> {
    let cd = field.class_data()?;
    let (r1, r2) = field.signature();
    let ln_kappa = r1 as f64 * 2f64.ln() + r2 as f64 * (2.0 * PI).ln()
        + (cd.class_number as f64).ln()
        + cd.regulator.ln()
        - (cd.roots_of_unity as f64).ln()
        - 0.5 * field.abs_discriminant().ln();
    let residue = Residue::new(ln_kappa.exp(), ResidueProvenance::ExactClassNumberFormula)?;
    if field.degree() >= 2 {
        let abs_disc = field.abs_discriminant();
        let floor = zimmert_lower(abs_disc)?;
        let ceiling = louboutin_upper(field.degree(), abs_disc)?;
        if !(residue.value > floor && residue.value <= ceiling) {
            return Err(Error::invariant(
                "exact residue lies between the Zimmert floor and the Louboutin ceiling",
                format!("kappa = {} outside ({floor}, {ceiling}]; check the class data", residue.value),
            ));
        }
    }
    Ok(residue)
}

/// Parse a field descriptor document.
pub fn load_field(descriptor_text: &str) -> Result<FieldDescriptor> {
    let raw: RawDescriptor =
        toml::from_str(descriptor_text).map_err(|e| Error::Schema(e.message().to_string()))?;
    FieldDescriptor::from_raw(raw)
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDescriptor {
    poly: Vec<IntLit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    signature: Option<[u32; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    discriminant: Option<IntLit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    class_number: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    regulator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    roots_of_unity: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    normal_over_q: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    normal_tower: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadratic_subfield: Option<Tristate>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum IntLit {
    Int(i64),
    Text(String),
}

impl IntLit {
    fn to_big(&self) -> Result<BigInt> {
        match self {
            IntLit::Int(v) => Ok(BigInt::from(*v)),
            IntLit::Text(t) => t
                .trim()
                .parse()
                .map_err(|_| Error::Schema(format!("`{t}` is not an integer"))),
        }
    }

    fn from_big(v: &BigInt) -> IntLit {
        match v.to_i64() {
            Some(x) => IntLit::Int(x),
            None => IntLit::Text(v.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Tristate {
    Flag(bool),
    Word(String),
}

impl Tristate {
    fn to_option(&self) -> Result<Option<bool>> {
        match self {
            Tristate::Flag(b) => Ok(Some(*b)),
            Tristate::Word(w) => match w.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                "unknown" => Ok(None),
                other => Err(Error::Schema(format!(
                    "quadratic_subfield must be true, false or \"unknown\", got `{other}`"
                ))),
            },
        }
    }

    fn from_option(v: Option<bool>) -> Tristate {
        match v {
            Some(b) => Tristate::Flag(b),
            None => Tristate::Word("unknown".into()),
        }
    }
}
