//! L-groups of Dedekind rings from descriptor data, and the
//! Grothendieck-Witt groups of ℤ.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::abelian::{direct_sum, FgAbelianGroup};
use crate::arith;
use crate::bernoulli::{k_odd_part, w_denominator};
use crate::error::{Error, Result};

/// The arithmetic data of a Dedekind ring `R` that the L-group formulas
/// consume. Witt groups are inputs, not computed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DedekindDescriptor {
    pub name: String,
    /// 0 or a prime.
    pub fraction_field_char: u64,
    /// Fraction field is a number field.
    pub is_number_ring: bool,
    pub real_embeddings: u32,
    pub pic_mod2: FgAbelianGroup,
    /// Residue-field sizes at the dyadic primes.
    pub dyadic_primes: Vec<u64>,
    pub witt_s: FgAbelianGroup,
    pub witt_q: FgAbelianGroup,
    /// Total cokernel `A` of the square comparing `L₀^q → L₀^s` over `R`
    /// and its 2-adic completion.
    #[serde(default)]
    pub coker_a: Option<FgAbelianGroup>,
}

impl DedekindDescriptor {
    pub fn dyadic_count(&self) -> usize {
        self.dyadic_primes.len()
    }

    /// Whether the fraction field is a global field, which the formulas in
    /// degrees `1, 2, 3 (mod 4)` need.
    pub fn is_global(&self) -> bool {
        self.is_number_ring || self.fraction_field_char != 0
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("ring descriptor: {e}")))
    }
}

/// ℤ: `W^s = W^q = ℤ`, one dyadic prime with residue field 𝔽₂, `A = 0`.
pub fn ring_z() -> DedekindDescriptor {
    DedekindDescriptor {
        name: "Z".into(),
        fraction_field_char: 0,
        is_number_ring: true,
        real_embeddings: 1,
        pic_mod2: FgAbelianGroup::trivial(),
        dyadic_primes: vec![2],
        witt_s: FgAbelianGroup::free(1),
        witt_q: FgAbelianGroup::free(1),
        coker_a: Some(FgAbelianGroup::trivial()),
    }
}

/// ℤ[1/2]: no dyadic primes, so quadratic and symmetric agree, and
/// `W = W(ℤ) ⊕ W(𝔽₂) = ℤ ⊕ ℤ/2`.
pub fn ring_z_half() -> DedekindDescriptor {
    let w = FgAbelianGroup::from_u64s(1, &[2]);
    DedekindDescriptor {
        name: "Z[1/2]".into(),
        fraction_field_char: 0,
        is_number_ring: true,
        real_embeddings: 1,
        pic_mod2: FgAbelianGroup::trivial(),
        dyadic_primes: vec![],
        witt_s: w.clone(),
        witt_q: w,
        coker_a: Some(FgAbelianGroup::trivial()),
    }
}

/// ℤ[1/ℓ] for an odd prime ℓ: `W^s = ℤ ⊕ W(𝔽_ℓ)`. `W^q` is the kernel of
/// `L₀^q(ℤ₂) ⊕ W^s → L₀^s(ℤ₂)`, which is `ℤ ⊕ ℤ/2` for `ℓ ≡ 1 (4)` and `ℤ`
/// for `ℓ ≡ 3 (4)`.
pub fn ring_z_inv(l: u64) -> Result<DedekindDescriptor> {
    if l == 2 {
        return Ok(ring_z_half());
    }
    if !arith::is_prime(l) {
        return Err(Error::InvalidArgument(format!("{l} is not a prime")));
    }
    let (witt_s, witt_q) = if l % 4 == 1 {
        (FgAbelianGroup::from_u64s(1, &[2, 2]), FgAbelianGroup::from_u64s(1, &[2]))
    } else {
        (FgAbelianGroup::from_u64s(1, &[4]), FgAbelianGroup::free(1))
    };
    Ok(DedekindDescriptor {
        name: format!("Z[1/{l}]"),
        fraction_field_char: 0,
        is_number_ring: true,
        real_embeddings: 1,
        pic_mod2: FgAbelianGroup::trivial(),
        dyadic_primes: vec![2],
        witt_s,
        witt_q,
        coker_a: Some(FgAbelianGroup::trivial()),
    })
}

/// Eisenstein integers ℤ[ζ₃]: a PID with the single dyadic prime (2),
/// residue field 𝔽₄.
pub fn ring_eisenstein() -> DedekindDescriptor {
    DedekindDescriptor {
        name: "Z[zeta3]".into(),
        fraction_field_char: 0,
        is_number_ring: true,
        real_embeddings: 0,
        pic_mod2: FgAbelianGroup::trivial(),
        dyadic_primes: vec![4],
        witt_s: FgAbelianGroup::cyclic(4u32),
        witt_q: FgAbelianGroup::cyclic(2u32),
        coker_a: Some(FgAbelianGroup::from_u64s(0, &[4, 2])),
    }
}

/// Resolve a ring name: `z`, `z-half`, `z-inv-<ℓ>`, `eisenstein`.
pub fn builtin_ring(name: &str) -> Result<DedekindDescriptor> {
    let n = name.trim().to_ascii_lowercase();
    match n.as_str() {
        "z" => Ok(ring_z()),
        "z-half" | "z[1/2]" => Ok(ring_z_half()),
        "eisenstein" | "z[zeta3]" => Ok(ring_eisenstein()),
        _ => {
            if let Some(l) = n.strip_prefix("z-inv-").or_else(|| n.strip_prefix("z[1/").and_then(|s| s.strip_suffix(']'))) {
                let l = l.parse::<u64>().map_err(|_| Error::InvalidArgument(format!("bad prime in ring name {name}")))?;
                return ring_z_inv(l);
            }
            Err(Error::InvalidArgument(format!("unknown ring {name}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LFlavor {
    Sym,
    SkewSym,
    Quad,
    SkewQuad,
    GenuineSym,
}

impl LFlavor {
    pub const ALL: [LFlavor; 5] = [LFlavor::Sym, LFlavor::SkewSym, LFlavor::Quad, LFlavor::SkewQuad, LFlavor::GenuineSym];

    pub fn name(self) -> &'static str {
        match self {
            LFlavor::Sym => "sym",
            LFlavor::SkewSym => "skew_sym",
            LFlavor::Quad => "quad",
            LFlavor::SkewQuad => "skew_quad",
            LFlavor::GenuineSym => "genuine_sym",
        }
    }
}

impl fmt::Display for LFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LFlavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LFlavor::ALL
            .into_iter()
            .find(|f| f.name() == s.trim().replace('-', "_"))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown L flavor {s}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GwFlavor {
    Sym,
    SkewSym,
    GenuineQuad,
    SkewGenuineQuad,
}

impl GwFlavor {
    pub const ALL: [GwFlavor; 4] = [GwFlavor::Sym, GwFlavor::SkewSym, GwFlavor::GenuineQuad, GwFlavor::SkewGenuineQuad];

    pub fn name(self) -> &'static str {
        match self {
            GwFlavor::Sym => "sym",
            GwFlavor::SkewSym => "skew_sym",
            GwFlavor::GenuineQuad => "genuine_quad",
            GwFlavor::SkewGenuineQuad => "skew_genuine_quad",
        }
    }

    /// Column heading in rendered tables.
    pub fn heading(self) -> &'static str {
        match self {
            GwFlavor::Sym => "GW^s",
            GwFlavor::SkewSym => "GW^-s",
            GwFlavor::GenuineQuad => "GW^gq",
            GwFlavor::SkewGenuineQuad => "GW^-gq",
        }
    }
}

impl fmt::Display for GwFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GwFlavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GwFlavor::ALL
            .into_iter()
            .find(|f| f.name() == s.trim().replace('-', "_"))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown GW flavor {s}")))
    }
}

fn z2_power(k: usize) -> FgAbelianGroup {
    FgAbelianGroup::elementary(2, k)
}

fn symmetric_l(ring: &DedekindDescriptor, n: i64) -> Result<FgAbelianGroup> {
    let r = n.rem_euclid(4);
    if ring.fraction_field_char == 2 {
        // 2-periodic in characteristic 2.
        return Ok(if r % 2 == 0 { ring.witt_s.clone() } else { ring.pic_mod2.clone() });
    }
    match r {
        0 => Ok(ring.witt_s.clone()),
        1 => {
            if !ring.is_global() {
                return Err(Error::InsufficientRingData("residue fields at dyadic primes need a global fraction field".into()));
            }
            Ok(z2_power(ring.dyadic_count()))
        }
        2 => Ok(FgAbelianGroup::trivial()),
        _ => {
            if !ring.is_global() {
                return Err(Error::InsufficientRingData("coker of the residue map is Pic/2 only over global fields".into()));
            }
            Ok(ring.pic_mod2.clone())
        }
    }
}

fn quadratic_l(ring: &DedekindDescriptor, n: i64) -> Result<FgAbelianGroup> {
    if ring.fraction_field_char == 2 {
        return Err(Error::InsufficientRingData("quadratic L-groups in characteristic 2 are not covered".into()));
    }
    match n.rem_euclid(4) {
        0 => Ok(ring.witt_q.clone()),
        1 => Ok(FgAbelianGroup::trivial()),
        2 => {
            if !ring.is_global() {
                return Err(Error::InsufficientRingData("dyadic residue fields need a global fraction field".into()));
            }
            Ok(z2_power(ring.dyadic_count()))
        }
        _ => {
            let a = ring.coker_a.clone().ok_or_else(|| Error::InsufficientRingData("coker_A is required in degrees 3 mod 4".into()))?;
            let pic = symmetric_l(ring, 3)?;
            // 0 → A → L₃^q → Pic/2 → 0 is only known to split when one end
            // vanishes.
            let unresolved = !a.is_trivial() && !pic.is_trivial();
            Ok(direct_sum(&a, &pic).with_conditional(unresolved))
        }
    }
}

fn is_integers(ring: &DedekindDescriptor) -> bool {
    *ring == ring_z()
}

/// `L_n` of `ring` in the given flavor.
pub fn l_group(ring: &DedekindDescriptor, flavor: LFlavor, n: i64) -> Result<FgAbelianGroup> {
    match flavor {
        LFlavor::Sym => symmetric_l(ring, n),
        LFlavor::SkewSym => symmetric_l(ring, n - 2),
        LFlavor::Quad => quadratic_l(ring, n),
        LFlavor::SkewQuad => quadratic_l(ring, n - 2),
        LFlavor::GenuineSym => {
            if !is_integers(ring) {
                return Err(Error::InsufficientRingData("genuine symmetric L-groups are tabulated for Z only".into()));
            }
            Ok(l_genuine_symmetric_z(n))
        }
    }
}

/// `L^gs_n(ℤ)`: symmetric for `n ≥ 0`, zero at `-1, -2`, quadratic below.
pub fn l_genuine_symmetric_z(n: i64) -> FgAbelianGroup {
    let z = ring_z();
    match n {
        -2 | -1 => FgAbelianGroup::trivial(),
        n if n >= 0 => symmetric_l(&z, n).expect("Z is global"),
        n => quadratic_l(&z, n).expect("Z has full data"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CofibreFlavor {
    Orthogonal,
    Symplectic,
}

impl FromStr for CofibreFlavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "orthogonal" => Ok(Self::Orthogonal),
            "symplectic" => Ok(Self::Symplectic),
            _ => Err(Error::InvalidArgument(format!("unknown cofibre flavor {s}"))),
        }
    }
}

/// Homotopy of the cofibre of genuine quadratic → genuine symmetric
/// L-theory of ℤ. The symplectic one is the double suspension.
pub fn normal_cofibre(i: i64, flavor: CofibreFlavor) -> FgAbelianGroup {
    let i = match flavor {
        CofibreFlavor::Orthogonal => i,
        CofibreFlavor::Symplectic => i - 2,
    };
    match i {
        1 | -1 => FgAbelianGroup::cyclic(2u32),
        0 => FgAbelianGroup::cyclic(8u32),
        _ => FgAbelianGroup::trivial(),
    }
}

fn w_cyclic(two_n: u64, times: u32) -> Result<FgAbelianGroup> {
    Ok(FgAbelianGroup::cyclic(w_denominator(two_n)? * BigUint::from(times)))
}

/// Classical ε-symmetric and genuine ε-quadratic Grothendieck-Witt groups
/// of ℤ.
pub fn gw_group_z(flavor: GwFlavor, n: u64, assume_vandiver: bool) -> Result<FgAbelianGroup> {
    let z = FgAbelianGroup::free(1);
    let g = match flavor {
        GwFlavor::Sym => match (n, n % 8) {
            (0, _) => FgAbelianGroup::free(2),
            (_, 0) => FgAbelianGroup::from_u64s(1, &[2]),
            (_, 1) => z2_power(3),
            (_, 2) => direct_sum(&z2_power(2), &k_odd_part(n, assume_vandiver)?),
            (_, 3) => w_cyclic(n.div_ceil(2), 1)?,
            (_, 4) => z,
            (_, 5) => FgAbelianGroup::trivial(),
            (_, 6) => k_odd_part(n, assume_vandiver)?,
            _ => w_cyclic(n.div_ceil(2), 1)?,
        },
        GwFlavor::SkewSym => match (n, n % 8) {
            (0, _) => z,
            (_, 0) | (_, 1) => FgAbelianGroup::trivial(),
            (_, 2) | (_, 6) => direct_sum(&z, &k_odd_part(n, assume_vandiver)?),
            (_, 3) => w_cyclic(n.div_ceil(2), 2)?,
            (_, 4) | (_, 5) => FgAbelianGroup::cyclic(2u32),
            _ => w_cyclic(n.div_ceil(2), 1)?,
        },
        GwFlavor::GenuineQuad => match n {
            0 => FgAbelianGroup::free(2),
            1 => z2_power(2),
            _ => gw_group_z(GwFlavor::Sym, n, assume_vandiver)?,
        },
        GwFlavor::SkewGenuineQuad => match n {
            0 => FgAbelianGroup::from_u64s(1, &[2]),
            1 => FgAbelianGroup::cyclic(4u32),
            2 => z,
            3 => FgAbelianGroup::cyclic(24u32),
            _ => gw_group_z(GwFlavor::SkewSym, n, assume_vandiver)?,
        },
    };
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Json,
    Csv,
}

impl FromStr for TableFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "markdown" | "md" => Ok(Self::Markdown),
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::InvalidArgument(format!("unknown format {s}"))),
        }
    }
}

/// Marker appended to entries that depend on an unproved conjecture.
pub const CONDITIONAL_MARK: &str = "*";

pub fn render_group(g: &FgAbelianGroup) -> String {
    if g.is_conditional() {
        format!("{g}{CONDITIONAL_MARK}")
    } else {
        g.to_string()
    }
}

/// A table of `GW_n(ℤ)` over `degrees` with one column per flavor.
pub fn render_table(flavors: &[GwFlavor], degrees: std::ops::RangeInclusive<u64>, format: TableFormat, assume_vandiver: bool) -> Result<String> {
    let mut rows = Vec::new();
    for n in degrees {
        let cells = flavors.iter().map(|f| gw_group_z(*f, n, assume_vandiver)).collect::<Result<Vec<_>>>()?;
        rows.push((n, cells));
    }
    let out = match format {
        TableFormat::Markdown => {
            let mut s = String::from("| n |");
            for f in flavors {
                s += &format!(" {} |", f.heading());
            }
            s += "\n|---|";
            for _ in flavors {
                s += "---|";
            }
            s.push('\n');
            for (n, cells) in &rows {
                s += &format!("| {n} |");
                for c in cells {
                    s += &format!(" {} |", render_group(c));
                }
                s.push('\n');
            }
            s
        }
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["n".to_string()];
            header.extend(flavors.iter().map(|f| f.name().to_string()));
            w.write_record(&header).map_err(|e| Error::Io(e.to_string()))?;
            for (n, cells) in &rows {
                let mut rec = vec![n.to_string()];
                rec.extend(cells.iter().map(render_group));
                w.write_record(&rec).map_err(|e| Error::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))?
        }
        TableFormat::Json => {
            let mut by_degree = Map::new();
            for (n, cells) in &rows {
                let mut entry = Map::new();
                for (f, c) in flavors.iter().zip(cells) {
                    let mut g = c.to_json();
                    g["text"] = json!(render_group(c));
                    entry.insert(f.name().to_string(), g);
                }
                by_degree.insert(n.to_string(), Value::Object(entry));
            }
            let flavors: Vec<&str> = flavors.iter().map(|f| f.name()).collect();
            let v = json!({"flavors": flavors, "degrees": Value::Object(by_degree)});
            serde_json::to_string_pretty(&v).map_err(|e| Error::Internal(e.to_string()))? + "\n"
        }
    };
    Ok(out)
}
