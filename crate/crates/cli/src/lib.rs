//! The `gwcalc` command line. [`run`] does the work so that it can be driven
//! from tests without spawning a process.

use std::io::Write;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use gwcalc::bernoulli::{bernoulli_rows, k_group_z, persist_global_cache, von_staudt_checks};
use gwcalc::forms::{matrix_from_json, standard_form, AnyForm, CoefficientDomain, Domain, LagrangianSearch, StandardKind};
use gwcalc::lattice::{devissage_class, integral_sublattice, nonzero_classes, torsion_linking_form, RationalLattice};
use gwcalc::linalg::Matrix;
use gwcalc::ring::{Rationals, Ring};
use gwcalc::tables::{builtin_ring, l_group, render_group, render_table, DedekindDescriptor, GwFlavor, LFlavor, TableFormat};
use gwcalc::witt::{
    hilbert_symbol, integral_kernel_order, second_residue, witt_class, witt_class_finite, witt_group_structure, witt_q_decompose,
    FieldDesc, Place, WittClass,
};
use gwcalc::{Error, FgAbelianGroup, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "gwcalc", version, about = "Exact Witt, L- and Grothendieck-Witt group computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect forms.
    #[command(subcommand)]
    Form(FormCmd),
    /// Witt classes, residues and Hilbert symbols.
    #[command(subcommand)]
    Witt(WittCmd),
    /// Discriminant forms of lattices and their residue classes.
    #[command(subcommand)]
    Boundary(BoundaryCmd),
    /// CSV rows `2n, B_2n, c_n, w_2n`.
    Bern {
        #[arg(long)]
        max: u64,
    },
    /// K-groups of the integers.
    Ktable {
        #[arg(long)]
        max: u64,
        /// Treat Vandiver's conjecture as true.
        #[arg(long)]
        vandiver: bool,
    },
    /// L-groups of a Dedekind ring over a range of degrees.
    Lgroups {
        /// z, z-half, eisenstein or z-inv-<l>.
        #[arg(long, default_value = "z", conflicts_with = "ring_json")]
        ring: String,
        /// A ring descriptor as inline JSON or a file.
        #[arg(long)]
        ring_json: Option<String>,
        #[arg(long, default_value = "sym")]
        flavor: LFlavor,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, default_value_t = 7, allow_hyphen_values = true)]
        to: i64,
        #[arg(long, default_value = "csv")]
        format: TableFormat,
    },
    /// Grothendieck-Witt groups of the integers.
    Gwz {
        #[arg(long, value_delimiter = ',', default_value = "sym,skew_sym")]
        flavor: Vec<GwFlavor>,
        #[arg(long)]
        max: u64,
        #[arg(long)]
        vandiver: bool,
        #[arg(long, default_value = "markdown")]
        format: TableFormat,
    },
    /// von Staudt checks and the lattice/diagonal residue comparison.
    Selftest {
        #[arg(long, default_value_t = 500)]
        bernoulli_max: u64,
        #[arg(long, default_value_t = 50)]
        forms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum FormCmd {
    /// Rank, determinant and whatever invariants the domain supports.
    Info {
        #[arg(long)]
        form: String,
    },
    /// A named form: hyperbolic, hyperbolic-skew, hyp-quad-0, hyp-quad-1,
    /// e8, diag:a,b,...
    Standard {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value = "Z")]
        domain: String,
    },
    /// Search for a strict Lagrangian over ℤ or a finite field.
    Lagrangian {
        #[arg(long)]
        form: String,
        /// Box size for the search over ℤ.
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
}

#[derive(Subcommand, Debug)]
enum WittCmd {
    Class {
        #[arg(long)]
        form: String,
        /// Q, R, Q_p, F_p or F_p^e; defaults to the form's own field.
        #[arg(long)]
        field: Option<FieldDesc>,
    },
    Residue {
        #[arg(long)]
        form: String,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        uniformizer: Option<String>,
    },
    /// Signature and all nonzero residues of a form over ℚ.
    Decompose {
        #[arg(long)]
        form: String,
    },
    /// The Witt group of a field other than ℚ.
    Group {
        #[arg(long)]
        field: FieldDesc,
    },
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// A prime or `inf`.
        #[arg(long)]
        place: Place,
    },
    /// The kernel of the residue map on W(ℚ_p).
    Kernel {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Subcommand, Debug)]
enum BoundaryCmd {
    Lattice {
        #[arg(long)]
        form: String,
        /// Basis vectors as the columns of a rational matrix; the standard
        /// lattice if omitted.
        #[arg(long, conflicts_with = "sublattice")]
        basis: Option<String>,
        /// Use a maximal integral sublattice of the standard one.
        #[arg(long)]
        sublattice: bool,
    },
}

/// Runs the command line on `args` (program name first) and returns the
/// exit code: 0 on success, 1 for domain errors, 2 for usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = dispatch(cli.command, out).and_then(|code| persist_global_cache().map(|_| code));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    let text = match command {
        Command::Form(cmd) => pretty(&form_command(cmd)?),
        Command::Witt(cmd) => witt_command(cmd)?,
        Command::Boundary(BoundaryCmd::Lattice { form, basis, sublattice }) => pretty(&boundary(&form, basis.as_deref(), sublattice)?),
        Command::Bern { max } => bern(max)?,
        Command::Ktable { max, vandiver } => {
            let mut s = String::from("n,k_n\n");
            for n in 0..=max {
                s += &format!("{n},{}\n", render_group(&k_group_z(n, vandiver)?));
            }
            s
        }
        Command::Lgroups { ring, ring_json, flavor, from, to, format } => {
            let ring = match ring_json {
                Some(src) => DedekindDescriptor::from_json(&read_json(&src)?)?,
                None => builtin_ring(&ring)?,
            };
            lgroups(&ring, flavor, from, to, format)?
        }
        Command::Gwz { flavor, max, vandiver, format } => render_table(&flavor, 0..=max, format, vandiver)?,
        Command::Selftest { bernoulli_max, forms, seed } => {
            let (text, ok) = selftest(bernoulli_max, forms, seed)?;
            write_out(out, &text)?;
            return Ok(if ok { 0 } else { 1 });
        }
    };
    write_out(out, &text)?;
    Ok(0)
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    let mut write = || -> std::io::Result<()> {
        out.write_all(text.as_bytes())?;
        if !text.ends_with('\n') {
            out.write_all(b"\n")?;
        }
        out.flush()
    };
    match write() {
        // A reader like `head` hung up early; that is not our failure.
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r.map_err(|e| Error::Io(e.to_string())),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Inline JSON if it looks like JSON, otherwise a path.
fn read_json(src: &str) -> Result<Value> {
    let t = src.trim_start();
    let text = if t.starts_with('[') || t.starts_with('{') {
        src.to_string()
    } else {
        std::fs::read_to_string(src).map_err(|e| Error::Io(format!("{src}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{e}")))
}

fn read_form(src: &str) -> Result<AnyForm> {
    AnyForm::from_json(&read_json(src)?)
}

fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad rational {s}")))
}

fn group_json(g: &FgAbelianGroup) -> Value {
    let mut v = g.to_json();
    v["text"] = json!(render_group(g));
    v
}

fn columns_json<R: Domain>(r: &R, m: &Matrix<R::Elem>) -> Value {
    (0..m.cols()).map(|j| m.column(j).iter().map(|x| r.elem_to_json(x)).collect::<Vec<_>>()).collect()
}

fn rows_json<R: Domain>(r: &R, m: &Matrix<R::Elem>) -> Value {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| r.elem_to_json(x)).collect::<Vec<_>>()).collect()
}

// ---------------------------------------------------------------------------
// form

fn form_command(cmd: FormCmd) -> Result<Value> {
    match cmd {
        FormCmd::Info { form } => form_info(&read_form(&form)?),
        FormCmd::Standard { kind, domain } => {
            let domain = CoefficientDomain::from_str(&domain)?;
            Ok(standard_form(&parse_kind(&kind)?, &domain)?.to_json())
        }
        FormCmd::Lagrangian { form, bound } => lagrangian(&read_form(&form)?, bound),
    }
}

fn parse_kind(s: &str) -> Result<StandardKind> {
    let s = s.trim();
    if let Some(list) = s.strip_prefix("diag:") {
        let xs = list.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        return Ok(StandardKind::Diag(xs));
    }
    if let Some(a) = s.strip_prefix("one:") {
        return Ok(StandardKind::One(parse_rational(a)?));
    }
    match s {
        "hyperbolic" => Ok(StandardKind::HyperbolicSym),
        "hyperbolic-skew" => Ok(StandardKind::HyperbolicSkew),
        "hyp-quad-0" => Ok(StandardKind::HypQuadArf0),
        "hyp-quad-1" => Ok(StandardKind::HypQuadArf1),
        "e8" => Ok(StandardKind::E8),
        _ => Err(Error::InvalidArgument(format!("unknown form kind {s}"))),
    }
}

fn form_info(f: &AnyForm) -> Result<Value> {
    let mut info = json!({"form": f.to_json()});
    match f {
        AnyForm::SymQ(g) => {
            info["rank"] = json!(g.rank());
            info["determinant"] = Rationals.elem_to_json(&g.determinant()?);
            info["nondegenerate"] = json!(g.is_nondegenerate());
            if g.epsilon() == 1 && g.is_nondegenerate() {
                let (entries, _) = g.diagonalize()?;
                info["diagonal"] = entries.iter().map(|a| Rationals.elem_to_json(a)).collect();
                info["signature"] = json!(g.signature()?);
                info["witt"] = witt_class(g, FieldDesc::Q)?.to_json();
            }
        }
        AnyForm::SymZ(g) => {
            info["rank"] = json!(g.rank());
            info["determinant"] = json!(g.determinant().to_string());
            info["unimodular"] = json!(g.is_unimodular());
            if g.epsilon() == 1 {
                info["even"] = json!(g.is_even());
                if g.to_rational().is_nondegenerate() {
                    info["signature"] = json!(g.signature()?);
                    info["witt"] = witt_class(&g.to_rational(), FieldDesc::Q)?.to_json();
                }
            }
        }
        AnyForm::SymF(g) => {
            info["rank"] = json!(g.rank());
            info["determinant"] = g.ring().elem_to_json(&g.determinant()?);
            info["nondegenerate"] = json!(g.is_nondegenerate());
            if g.epsilon() == 1 && g.is_nondegenerate() {
                info["witt"] = WittClass::Finite(witt_class_finite(g)?).to_json();
            }
        }
        AnyForm::SymM(g) => info["rank"] = json!(g.rank()),
        AnyForm::QuadF(q) => {
            let pol = q.polarization();
            info["rank"] = json!(q.rank());
            info["polarization"] = pol.to_json();
            info["nondegenerate"] = json!(pol.is_nondegenerate());
            if q.ring().p() == 2 && pol.is_nondegenerate() {
                info["arf"] = json!(q.arf_invariant()?);
            }
        }
        AnyForm::QuadQ(q) => {
            info["rank"] = json!(q.rank());
            info["polarization"] = q.polarization().to_json();
        }
        AnyForm::QuadZ(q) => {
            info["rank"] = json!(q.rank());
            info["polarization"] = q.polarization().to_json();
        }
        AnyForm::QuadM(q) => {
            info["rank"] = json!(q.rank());
            info["polarization"] = q.polarization().to_json();
        }
    }
    Ok(info)
}

fn search_json<R: Domain>(r: &R, s: LagrangianSearch<R::Elem>) -> Value {
    match s {
        LagrangianSearch::Found(m) => json!({"status": "found", "basis": columns_json(r, &m)}),
        LagrangianSearch::DoesNotExist => json!({"status": "none"}),
        LagrangianSearch::NotFoundWithinBound => json!({"status": "not_found_within_bound"}),
    }
}

fn lagrangian(f: &AnyForm, bound: i64) -> Result<Value> {
    match f {
        AnyForm::SymF(g) => Ok(search_json(g.ring(), g.find_strict_lagrangian()?)),
        AnyForm::QuadF(q) => Ok(search_json(q.ring(), q.find_strict_lagrangian()?)),
        AnyForm::SymZ(g) => Ok(search_json(g.ring(), g.find_strict_lagrangian(bound)?)),
        AnyForm::QuadZ(q) => Ok(search_json(q.ring(), q.find_strict_lagrangian(bound)?)),
        _ => Err(Error::Coefficients("Lagrangian search runs over Z or a finite field".into())),
    }
}

// ---------------------------------------------------------------------------
// witt

fn witt_command(cmd: WittCmd) -> Result<String> {
    let v = match cmd {
        WittCmd::Class { form, field } => {
            let f = read_form(&form)?;
            match (&f, field) {
                (AnyForm::SymF(g), None) => WittClass::Finite(witt_class_finite(g)?).to_json(),
                (AnyForm::SymF(_), Some(_)) => {
                    return Err(Error::InvalidArgument("a form over a finite field has no other completions".into()))
                }
                (_, field) => witt_class(&f.as_rational_symmetric()?, field.unwrap_or(FieldDesc::Q))?.to_json(),
            }
        }
        WittCmd::Residue { form, p, uniformizer } => {
            let (entries, _) = read_form(&form)?.as_rational_symmetric()?.diagonalize()?;
            let pi = uniformizer.as_deref().map(parse_rational).transpose()?;
            WittClass::Finite(second_residue(&entries, p, pi.as_ref())?).to_json()
        }
        WittCmd::Decompose { form } => {
            let (signature, residues) = witt_q_decompose(&read_form(&form)?.as_rational_symmetric()?)?;
            WittClass::Rational { signature, residues }.to_json()
        }
        WittCmd::Group { field } => json!({"field": field.to_string(), "group": group_json(&witt_group_structure(field)?)}),
        WittCmd::Hilbert { a, b, place } => {
            let (a, b) = (parse_rational(&a)?, parse_rational(&b)?);
            if a == BigRational::from_integer(BigInt::from(0)) || b == BigRational::from_integer(BigInt::from(0)) {
                return Err(Error::InvalidArgument("Hilbert symbols need nonzero arguments".into()));
            }
            return Ok(hilbert_symbol(&a, &b, place).to_string());
        }
        WittCmd::Kernel { p } => json!({"p": p, "group": group_json(&integral_kernel_order(p)?)}),
    };
    Ok(pretty(&v))
}

// ---------------------------------------------------------------------------
// boundary

fn boundary(form: &str, basis: Option<&str>, sublattice: bool) -> Result<Value> {
    let ambient = read_form(form)?.as_rational_symmetric()?;
    let lattice = match basis {
        Some(b) => RationalLattice::new(ambient, matrix_from_json(&Rationals, &read_json(b)?)?)?,
        None if sublattice => integral_sublattice(&ambient)?,
        None => RationalLattice::standard(ambient),
    };
    let t = torsion_linking_form(&lattice)?;
    let classes = devissage_class(&t)?;
    let residues: serde_json::Map<String, Value> =
        classes.iter().map(|(p, c)| (p.to_string(), WittClass::Finite(*c).to_json())).collect();
    Ok(json!({
        "lattice": {"basis": columns_json(&Rationals, lattice.basis()), "gram": rows_json(&Rationals, &lattice.gram())},
        "torsion": t.to_json(),
        "residues": residues,
        "nonzero_primes": nonzero_classes(&classes).keys().collect::<Vec<_>>(),
    }))
}

// ---------------------------------------------------------------------------
// tables

fn bern(max: u64) -> Result<String> {
    let mut s = String::from("two_n,bernoulli,c,w\n");
    for (two_n, b, c, w) in bernoulli_rows(max)? {
        s += &format!("{two_n},{b},{c},{w}\n");
    }
    Ok(s)
}

fn lgroups(ring: &DedekindDescriptor, flavor: LFlavor, from: i64, to: i64, format: TableFormat) -> Result<String> {
    let rows = (from..=to).map(|n| Ok((n, l_group(ring, flavor, n)?))).collect::<Result<Vec<_>>>()?;
    let text = match format {
        TableFormat::Csv => {
            let mut s = format!("n,{}\n", flavor.name());
            for (n, g) in &rows {
                s += &format!("{n},{}\n", render_group(g));
            }
            s
        }
        TableFormat::Markdown => {
            let mut s = format!("| n | L^{} |\n|---|---|\n", flavor.name());
            for (n, g) in &rows {
                s += &format!("| {n} | {} |\n", render_group(g));
            }
            s
        }
        TableFormat::Json => {
            let degrees: Vec<Value> = rows.iter().map(|(n, g)| json!({"n": n, "group": group_json(g)})).collect();
            pretty(&json!({"ring": ring.name, "flavor": flavor.name(), "degrees": degrees}))
        }
    };
    Ok(text)
}

// ---------------------------------------------------------------------------
// selftest

fn random_odd_diagonal(r: &mut ChaCha8Rng) -> Vec<BigRational> {
    let odd = |r: &mut ChaCha8Rng| 2 * r.gen_range(0..10i64) + 1;
    (0..r.gen_range(1..=4))
        .map(|_| {
            let sign = if r.gen_bool(0.5) { -1 } else { 1 };
            BigRational::new((sign * odd(r)).into(), odd(r).into())
        })
        .collect()
}

fn selftest(bernoulli_max: u64, forms: usize, seed: u64) -> Result<(String, bool)> {
    let mut text = String::new();
    let report = von_staudt_checks(bernoulli_max)?;
    let vs_ok = report.passed();
    text += &format!("von Staudt (n ≤ {bernoulli_max}): {}", if vs_ok { "PASS" } else { "FAIL" });
    if let Some(f) = &report.failure {
        text += &format!(" ({f:?})");
    }
    text.push('\n');

    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    for i in 0..forms {
        let entries = random_odd_diagonal(&mut r);
        let form = gwcalc::SymBilForm::diagonal(Rationals, &entries);
        let lattice_side = nonzero_classes(&devissage_class(&torsion_linking_form(&integral_sublattice(&form)?)?)?);
        let (_, diagonal_side) = witt_q_decompose(&form)?;
        if lattice_side != diagonal_side {
            let shown: Vec<String> = entries.iter().map(|a| Rationals.render(a)).collect();
            mismatches.push(format!("#{i} <{}>", shown.join(", ")));
        }
    }
    let dp_ok = mismatches.is_empty();
    text += &format!("dual path ({forms} forms): {}", if dp_ok { "PASS" } else { "FAIL" });
    if !dp_ok {
        text += &format!(" ({})", mismatches.join("; "));
    }
    text.push('\n');
    Ok((text, vs_ok && dp_ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("gwcalc").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn ok_json(args: &[&str]) -> Value {
        let (code, out, err) = call(args);
        assert_eq!(code, 0, "{err}");
        serde_json::from_str(&out).unwrap()
    }

    #[test]
    fn gwz_markdown_symmetric() {
        let (code, out, _) = call(&["gwz", "--flavor", "sym", "--max", "23", "--format", "markdown"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "| n | GW^s |");
        assert_eq!(lines.len(), 26);
        assert_eq!(lines[2], "| 0 | ℤ ⊕ ℤ |");
        assert_eq!(lines[5], "| 3 | ℤ/24 |");
        assert_eq!(lines[24], "| 22 | ℤ/691 |");
        assert_eq!(lines[25], "| 23 | ℤ/65520 |");
    }

    #[test]
    fn gwz_is_deterministic() {
        let args = ["gwz", "--max", "40", "--format", "json"];
        assert_eq!(call(&args).1, call(&args).1);
    }

    #[test]
    fn residue_of_two_at_two() {
        let v = ok_json(&["witt", "residue", "--form", "[[2]]", "--p", "2"]);
        assert_eq!(v, json!({"field": "F_2", "invariants": {"rank_mod_2": 1}}));
        let v = ok_json(&["witt", "residue", "--form", "[[6]]", "--p", "3"]);
        assert_eq!(v["invariants"], json!({"rank_mod_2": 1, "disc": "nonsquare"}));
        let v = ok_json(&["witt", "residue", "--form", "[[5]]", "--p", "3"]);
        assert_eq!(v["invariants"]["rank_mod_2"], json!(0));
    }

    #[test]
    fn witt_group_of_q2() {
        let v = ok_json(&["witt", "group", "--field", "Q_2"]);
        assert_eq!(v["group"]["text"], json!("(ℤ/2)² ⊕ ℤ/8"));
        let v = ok_json(&["witt", "kernel", "--p", "2"]);
        assert_eq!(v["group"]["text"], json!("ℤ/2 ⊕ ℤ/8"));
    }

    #[test]
    fn hilbert_minus_one() {
        assert_eq!(call(&["witt", "hilbert", "--a", "-1", "--b", "-1", "--place", "2"]).1, "-1\n");
        assert_eq!(call(&["witt", "hilbert", "--a", "-1", "--b", "-1", "--place", "inf"]).1, "-1\n");
        assert_eq!(call(&["witt", "hilbert", "--a", "2", "--b", "3/5", "--place", "7"]).1, "1\n");
    }

    #[test]
    fn decompose_and_class() {
        let v = ok_json(&["witt", "decompose", "--form", "[[3,0],[0,-5]]"]);
        assert_eq!(v["invariants"]["signature"], json!(0));
        let primes: Vec<&String> = v["invariants"]["residues"].as_object().unwrap().keys().collect();
        assert_eq!(primes, ["3", "5"]);
        let v = ok_json(&["witt", "class", "--form", r#"{"domain": "GF(3)", "gram": [[1,0],[0,1]]}"#]);
        assert_eq!(v["field"], json!("F_3"));
    }

    #[test]
    fn boundary_of_diagonal_lattice() {
        let v = ok_json(&["boundary", "lattice", "--form", "[[3,0],[0,5]]"]);
        assert_eq!(v["torsion"]["group"]["torsion"], json!([15]));
        assert_eq!(v["nonzero_primes"], json!([3, 5]));
        let v = ok_json(&["boundary", "lattice", "--form", "[[1,0],[0,1]]", "--basis", "[[3,0],[0,1]]"]);
        assert_eq!(v["torsion"]["group"]["torsion"], json!([9]));
        assert_eq!(v["nonzero_primes"], json!([]));
    }

    #[test]
    fn bern_and_ktable() {
        let (code, out, _) = call(&["bern", "--max", "6"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("two_n,bernoulli,c,w"));
        assert_eq!(out.lines().nth(6), Some("12,-691/2730,691,65520"));
        let (_, out, _) = call(&["ktable", "--max", "3"]);
        assert_eq!(out, "n,k_n\n0,ℤ\n1,ℤ/2\n2,ℤ/2\n3,ℤ/48\n");
    }

    #[test]
    fn lgroups_of_eisenstein() {
        let (code, out, _) = call(&["lgroups", "--ring", "eisenstein", "--flavor", "quad", "--from", "-1", "--to", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "n,quad\n-1,ℤ/2 ⊕ ℤ/4\n0,ℤ/2\n1,0\n2,ℤ/2\n3,ℤ/2 ⊕ ℤ/4\n");
    }

    #[test]
    fn forms() {
        let v = ok_json(&["form", "info", "--form", r#"{"domain": "GF(2)", "epsilon": 1, "upper": [[1,1],[0,1]]}"#]);
        assert_eq!(v["arf"], json!(1));
        let e8 = ok_json(&["form", "standard", "--kind", "e8"]);
        let v = ok_json(&["form", "info", "--form", &e8.to_string()]);
        assert_eq!(v["determinant"], json!("1"));
        assert_eq!(v["even"], json!(true));
        assert_eq!(v["signature"], json!(8));
        let v = ok_json(&["form", "lagrangian", "--form", r#"{"domain": "GF(5)", "gram": [[1,0],[0,1]]}"#]);
        assert_eq!(v["status"], json!("found"));
        let v = ok_json(&["form", "lagrangian", "--form", r#"{"domain": "GF(3)", "gram": [[1,0],[0,1]]}"#]);
        assert_eq!(v["status"], json!("none"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["gwz", "--bogus"]).0, 2);
        assert_eq!(call(&["witt", "residue", "--form", "[[2", "--p", "2"]).0, 2);
        assert_eq!(call(&["witt", "residue", "--form", "/nonexistent.json", "--p", "2"]).0, 2);
        assert_eq!(call(&["witt", "residue", "--form", "[[2]]", "--p", "4"]).0, 2);
        // Well formed but undefined.
        let (code, _, err) = call(&["witt", "residue", "--form", "[[0]]", "--p", "3"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error: "));
        assert_eq!(call(&["boundary", "lattice", "--form", "[[1,0],[0,1]]", "--basis", "[[1,0],[0,4]]"]).0, 1);
        assert_eq!(call(&["witt", "group", "--field", "Q"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn selftest_passes() {
        let (code, out, _) = call(&["selftest", "--bernoulli-max", "60", "--forms", "20"]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out, "von Staudt (n ≤ 60): PASS\ndual path (20 forms): PASS\n");
    }
}
