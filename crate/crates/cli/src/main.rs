use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hecke::affine::Generator;
use hecke::rootsys::parse_rational;
use hecke::schemes::{
    c_rotation, preset, search, stated_c_determinant, Certificate, Family, SearchOptions, SearchOutcome, TwistPool,
};
use hecke::wonderful::{Side, TorusPoint};
use hecke::{Coweight, DegreeMode, RootSystem, SchemeFile, WeylElement};

#[derive(Parser)]
#[command(
    name = "hecke",
    version,
    about = "Root systems, affine Weyl groups and Hecke-modification schemes"
)]
struct Cli {
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root system data.
    #[command(subcommand)]
    Rootsys(RootsysCmd),
    /// Finite Weyl group operations.
    #[command(subcommand)]
    Weyl(WeylCmd),
    /// Affine Weyl group operations.
    #[command(subcommand)]
    Affine(AffineCmd),
    /// Affine Grassmannian cells.
    #[command(subcommand)]
    Cells(CellsCmd),
    /// Tangent maps on the torus closure of the wonderful compactification.
    #[command(subcommand)]
    Wonderful(WonderfulCmd),
    /// Modification schemes.
    #[command(subcommand)]
    Scheme(SchemeCmd),
    /// Runs the preset grid, the G2 obstruction and the C_l determinant table.
    Suite,
}

#[derive(Args, Clone)]
struct System {
    /// Cartan type (A, B, C, D, G2) or a product label such as A1xB2.
    #[arg(long = "type", alias = "family", value_name = "TYPE")]
    cartan: String,
    /// Rank; may be omitted for G2 and product labels.
    #[arg(long)]
    rank: Option<usize>,
}

impl System {
    fn build(&self) -> Result<RootSystem> {
        let rank = match self.rank {
            Some(r) => r,
            None => infer_rank(&self.cartan).ok_or_else(|| anyhow!("--rank is required for type {}", self.cartan))?,
        };
        Ok(RootSystem::from_label(&self.cartan, rank)?)
    }
}

fn infer_rank(label: &str) -> Option<usize> {
    let mut total = 0;
    for piece in label.split(['x', 'X', '+']) {
        let digits: String = piece.chars().filter(|c| c.is_ascii_digit()).collect();
        total += digits.parse::<usize>().ok()?;
    }
    Some(total)
}

#[derive(Subcommand)]
enum RootsysCmd {
    /// Simple roots, Cartan matrix, dimension and fundamental group.
    Show(System),
    /// Pairing of a coweight with a root.
    Pair {
        #[command(flatten)]
        sys: System,
        /// Coweight in fundamental-coweight coordinates, e.g. `1,0,1/2`.
        #[arg(long)]
        coweight: String,
        /// Root in simple-root coordinates, e.g. `1,1,0`.
        #[arg(long)]
        root: String,
    },
    /// Class of an integral coweight in the fundamental group.
    Class {
        #[command(flatten)]
        sys: System,
        #[arg(long)]
        coweight: String,
    },
    /// Kernel coweight of a simple type (1-based index).
    Kernel {
        #[command(flatten)]
        sys: System,
        #[arg(long)]
        index: usize,
    },
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Length and lex-least reduced word of a signed permutation.
    Reduce {
        #[command(flatten)]
        sys: System,
        /// Signed permutation such as `[2,-1,3]`.
        #[arg(long)]
        element: String,
    },
    /// Longest element and the index involution.
    Longest(System),
    /// Image of a root or a coweight.
    Act {
        #[command(flatten)]
        sys: System,
        #[arg(long)]
        element: String,
        #[arg(long, conflicts_with = "coweight")]
        root: Option<String>,
        #[arg(long)]
        coweight: Option<String>,
    },
    /// Minimal coset representatives of the stabilizer of a dominant coweight.
    Cosets {
        #[command(flatten)]
        sys: System,
        #[arg(long)]
        coweight: String,
    },
    /// Multiset of root images under the subgroup generated by the given elements.
    Orbit {
        #[command(flatten)]
        sys: System,
        /// Generators, separated by `;`.
        #[arg(long)]
        generators: String,
        /// Roots in simple-root coordinates, separated by `;`.
        #[arg(long)]
        roots: String,
    },
}

#[derive(Args)]
struct AffineArgs {
    #[command(flatten)]
    sys: System,
    /// Translation part in fundamental-coweight coordinates.
    #[arg(long)]
    translation: Option<String>,
    /// Finite part as a signed permutation.
    #[arg(long)]
    finite: Option<String>,
    /// Word in the generators, e.g. `0,1,2` (`0.j` for the j-th affine node).
    #[arg(long, conflicts_with_all = ["translation", "finite"])]
    word: Option<String>,
}

#[derive(Subcommand)]
enum AffineCmd {
    /// Length by inversion count and by word descent.
    Length(AffineArgs),
    /// The affine inversion set.
    Inversions(AffineArgs),
}

#[derive(Subcommand)]
enum CellsCmd {
    /// Dimension 2<λ,ρ> of the orbit of a dominant coweight.
    Dim {
        #[command(flatten)]
        sys: System,
        #[arg(long)]
        coweight: String,
    },
    /// Cells of the orbit and its Poincaré polynomial.
    Decompose {
        #[command(flatten)]
        sys: System,
        #[arg(long)]
        coweight: String,
    },
    /// Deformation dimension of the cocharacter -Σ r_i λ_i.
    Deform {
        #[command(flatten)]
        sys: System,
        #[arg(long)]
        r: String,
    },
}

#[derive(Subcommand)]
enum WonderfulCmd {
    /// Tangent map dL or dR at a point, optionally twisted.
    Action {
        #[command(flatten)]
        sys: System,
        #[arg(long)]
        point: String,
        #[arg(long, default_value = "left")]
        side: String,
        /// Weyl twist; forces the left side in the twisted chart.
        #[arg(long)]
        twist: Option<String>,
    },
    /// The lr-transpose identity at one point.
    Check {
        #[command(flatten)]
        sys: System,
        #[arg(long)]
        point: String,
    },
    /// The identity at all boundary points and at seeded random points.
    Sweep {
        #[command(flatten)]
        sys: System,
        #[arg(long, default_value_t = 100)]
        random: usize,
        #[arg(long, default_value_t = 50)]
        transpose: usize,
    },
    /// Inversion restricted to torus coordinates.
    Inversion {
        #[command(flatten)]
        sys: System,
        #[arg(long)]
        point: String,
    },
}

#[derive(Subcommand)]
enum SchemeCmd {
    /// Emits a preset scheme file (always JSON).
    Preset {
        /// A3, Cl or Dl.
        #[arg(long)]
        family: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        genus: u64,
    },
    /// Verifies a scheme file read from `--file` or stdin.
    Verify {
        #[arg(long)]
        file: Option<PathBuf>,
        /// Require every root degree to equal the genus.
        #[arg(long)]
        strict: bool,
    },
    /// Searches for a scheme passing verification.
    Search {
        #[command(flatten)]
        sys: System,
        #[arg(long)]
        genus: u64,
        /// Allowed 1-based coweight indices, e.g. `1,2`.
        #[arg(long)]
        coweights: Option<String>,
        /// Generators of a twist subgroup, separated by `;`.
        #[arg(long, conflicts_with = "twists")]
        generate: Option<String>,
        /// Explicit twists, separated by `;`.
        #[arg(long)]
        twists: Option<String>,
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
    },
    /// Aggregate feasibility screen.
    Obstruct {
        #[command(flatten)]
        sys: System,
        #[arg(long)]
        genus: u64,
    },
}

/// Result of a command: text for tables, JSON value, and the exit verdict.
struct Output {
    table: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(table: String, json: Value) -> Self {
        Output { table, json, ok: true }
    }
}

fn parse_list(s: &str) -> Result<Vec<String>> {
    let t = s.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(t.split(',').map(|x| x.trim().to_string()).collect())
}

fn parse_coweight(rs: &RootSystem, s: &str) -> Result<Coweight> {
    let coeffs = parse_list(s)?
        .iter()
        .map(|x| parse_rational(x))
        .collect::<hecke::Result<Vec<_>>>()
        .with_context(|| format!("--coweight `{s}`"))?;
    let lam = Coweight::new(coeffs);
    rs.check_coweight(&lam).with_context(|| format!("--coweight `{s}`"))?;
    Ok(lam)
}

fn parse_ints(s: &str, flag: &str) -> Result<Vec<i64>> {
    parse_list(s)?
        .iter()
        .map(|x| x.parse::<i64>().map_err(|_| anyhow!("{flag}: `{x}` is not an integer")))
        .collect()
}

fn parse_elements(rs: &RootSystem, s: &str) -> Result<Vec<WeylElement>> {
    s.split(';')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            rs.parse_weyl(x.trim())
                .with_context(|| format!("Weyl element `{}`", x.trim()))
        })
        .collect()
}

fn parse_root(rs: &RootSystem, s: &str) -> Result<usize> {
    Ok(rs.root_by_coeffs(&parse_ints(s, "--root")?)?)
}

fn parse_point(rs: &RootSystem, s: &str) -> Result<TorusPoint> {
    let z = parse_list(s)?
        .iter()
        .map(|x| parse_rational(x))
        .collect::<hecke::Result<Vec<_>>>()
        .with_context(|| format!("--point `{s}`"))?;
    if z.len() != rs.rank() {
        bail!("--point has {} coordinates, expected {}", z.len(), rs.rank());
    }
    Ok(TorusPoint::from_rationals(&z))
}

fn parse_generator(s: &str, rs: &RootSystem) -> Result<Generator> {
    let g = match s.split_once('.') {
        Some(("0", j)) => {
            let j: usize = j.parse().map_err(|_| anyhow!("--word: bad generator `{s}`"))?;
            if j == 0 {
                bail!("--word: affine nodes are numbered from 1 in `0.j`");
            }
            Generator::Affine(j - 1)
        }
        Some(_) => bail!("--word: bad generator `{s}`"),
        None => match s.parse::<usize>() {
            Ok(0) => Generator::Affine(0),
            Ok(i) => Generator::Simple(i - 1),
            Err(_) => bail!("--word: bad generator `{s}`"),
        },
    };
    if !rs.generators().contains(&g) {
        bail!("--word: generator `{s}` does not exist for {}", rs.label());
    }
    Ok(g)
}

fn read_scheme(file: &Option<PathBuf>) -> Result<SchemeFile> {
    let text = match file {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .context("reading scheme from stdin")?;
            s
        }
    };
    let source = file.as_ref().map_or("stdin".to_string(), |p| p.display().to_string());
    serde_json::from_str(&text).with_context(|| format!("parsing scheme file {source}"))
}

fn mode(strict: bool) -> DegreeMode {
    if strict {
        DegreeMode::Exact
    } else {
        DegreeMode::AtLeast
    }
}

fn matrix_table(m: &[Vec<i64>]) -> String {
    m.iter()
        .map(|r| r.iter().map(|x| format!("{x:>3}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn rootsys(cmd: RootsysCmd) -> Result<Output> {
    match cmd {
        RootsysCmd::Show(sys) => {
            let rs = sys.build()?;
            let doc = rs.to_doc();
            let table = format!(
                "{}: rank {}, dim {}, {} positive roots, |W| = {}\nsimple roots:\n{}\ncartan matrix:\n{}\nfundamental group: {:?}\n",
                rs.label(),
                rs.rank(),
                rs.dim(),
                rs.num_positive(),
                rs.weyl_order(),
                matrix_table(rs.simple_roots()),
                matrix_table(rs.cartan()),
                rs.fundamental_group()
            );
            Ok(Output::ok(table, serde_json::to_value(doc)?))
        }
        RootsysCmd::Pair { sys, coweight, root } => {
            let rs = sys.build()?;
            let lam = parse_coweight(&rs, &coweight)?;
            let id = parse_root(&rs, &root)?;
            let v = rs.pairing(&lam, id)?;
            Ok(Output::ok(format!("{v}\n"), json!({ "pairing": v.to_string() })))
        }
        RootsysCmd::Class { sys, coweight } => {
            let rs = sys.build()?;
            let lam = parse_coweight(&rs, &coweight)?;
            let c = rs.fundamental_group_class(&lam)?;
            Ok(Output::ok(format!("{c}\n"), serde_json::to_value(&c)?))
        }
        RootsysCmd::Kernel { sys, index } => {
            let rs = sys.build()?;
            if index == 0 || index > rs.rank() {
                bail!("--index {index} is out of range 1..={}", rs.rank());
            }
            let xi = rs.kernel_coweight(index - 1)?;
            let coroot = rs.to_coroot_basis(&xi);
            let coroot_text: Vec<String> = coroot.iter().map(|c| c.to_string()).collect();
            Ok(Output::ok(
                format!("xi_{index} = {xi} (coroot basis: ({}))\n", coroot_text.join(", ")),
                json!({ "coweight": xi, "coroot_basis": coroot_text }),
            ))
        }
    }
}

fn weyl(cmd: WeylCmd) -> Result<Output> {
    match cmd {
        WeylCmd::Reduce { sys, element } => {
            let rs = sys.build()?;
            let w = rs
                .parse_weyl(&element)
                .with_context(|| format!("--element `{element}`"))?;
            let w = rs.canonical(&w);
            Ok(Output::ok(
                format!("{w}: length {}, word {}\n", w.word().len(), w.word_display()),
                json!({ "element": w, "length": w.word().len(), "word": w.word().iter().map(|i| i + 1).collect::<Vec<_>>() }),
            ))
        }
        WeylCmd::Longest(sys) => {
            let rs = sys.build()?;
            let (w0, omega) = rs.longest_element();
            let omega1: Vec<usize> = omega.iter().map(|i| i + 1).collect();
            Ok(Output::ok(
                format!("w0 = {w0}, length {}\nomega = {omega1:?}\n", rs.length(&w0)),
                json!({ "w0": w0, "length": rs.length(&w0), "omega": omega1 }),
            ))
        }
        WeylCmd::Act {
            sys,
            element,
            root,
            coweight,
        } => {
            let rs = sys.build()?;
            let w = rs
                .parse_weyl(&element)
                .with_context(|| format!("--element `{element}`"))?;
            match (root, coweight) {
                (Some(r), None) => {
                    let id = parse_root(&rs, &r)?;
                    let img = rs.root(rs.act_root(&w, id));
                    Ok(Output::ok(
                        format!("{:?}\n", img.coeffs),
                        json!({ "root": img.coeffs, "euclid": img.euclid }),
                    ))
                }
                (None, Some(c)) => {
                    let lam = parse_coweight(&rs, &c)?;
                    let img = rs.act_coweight(&w, &lam)?;
                    Ok(Output::ok(format!("{img}\n"), json!({ "coweight": img })))
                }
                _ => bail!("exactly one of --root and --coweight is required"),
            }
        }
        WeylCmd::Cosets { sys, coweight } => {
            let rs = sys.build()?;
            let lam = parse_coweight(&rs, &coweight)?;
            let reps = rs.minimal_coset_reps(&lam)?;
            let mut table = String::new();
            for w in &reps {
                table.push_str(&format!("{w}  length {}  word {}\n", w.word().len(), w.word_display()));
            }
            table.push_str(&format!("{} representatives\n", reps.len()));
            Ok(Output::ok(
                table,
                json!({ "count": reps.len(), "representatives": reps }),
            ))
        }
        WeylCmd::Orbit { sys, generators, roots } => {
            let rs = sys.build()?;
            let gens = parse_elements(&rs, &generators)?;
            let group = rs.generated_subgroup(&gens);
            let ids = roots
                .split(';')
                .filter(|x| !x.trim().is_empty())
                .map(|r| parse_root(&rs, r))
                .collect::<Result<Vec<_>>>()?;
            let counts = rs.orbit_multiplicities(&group, &ids);
            let mut table = format!("subgroup of order {}\n", group.len());
            let mut rows = Vec::new();
            for (id, k) in &counts {
                let c = &rs.root(*id).coeffs;
                table.push_str(&format!("{c:?}  x{k}\n"));
                rows.push(json!({ "root": c, "multiplicity": k }));
            }
            Ok(Output::ok(table, json!({ "group_order": group.len(), "images": rows })))
        }
    }
}

fn affine_element(args: &AffineArgs) -> Result<(RootSystem, hecke::AffineWeylElement)> {
    let rs = args.sys.build()?;
    if let Some(word) = &args.word {
        let gens = parse_list(word)?
            .iter()
            .map(|g| parse_generator(g, &rs))
            .collect::<Result<Vec<_>>>()?;
        let s = rs.affine_from_word(&gens);
        return Ok((rs, s));
    }
    let lam = match &args.translation {
        Some(t) => parse_coweight(&rs, t)?,
        None => Coweight::zero(rs.rank()),
    };
    let w = match &args.finite {
        Some(f) => rs.parse_weyl(f).with_context(|| format!("--finite `{f}`"))?,
        None => rs.identity(),
    };
    let s = rs.affine_element(&lam, &w).context("--translation")?;
    Ok((rs, s))
}

fn affine(cmd: AffineCmd) -> Result<Output> {
    match cmd {
        AffineCmd::Length(args) => {
            let (rs, s) = affine_element(&args)?;
            let len = rs.affine_length(&s);
            let descent = rs.length_via_word(&s, 100_000)?;
            let word: Vec<String> = descent.word.iter().map(|g| g.to_string()).collect();
            let table = format!(
                "{}\nlength {} (inversions), {} (descent)\nword {}\nremainder {}\n",
                s,
                len,
                descent.length,
                if word.is_empty() {
                    "(empty)".to_string()
                } else {
                    word.join(" ")
                },
                descent.remainder
            );
            Ok(Output::ok(
                table,
                json!({
                    "element": s,
                    "length": len,
                    "descent_length": descent.length,
                    "word": word,
                    "remainder": descent.remainder,
                    "extended": rs.is_extended(&s),
                }),
            ))
        }
        AffineCmd::Inversions(args) => {
            let (rs, s) = affine_element(&args)?;
            let set = rs.inversion_set(&s);
            let mut table = String::new();
            let mut rows = Vec::new();
            for b in &set {
                let c = &rs.root(b.root).coeffs;
                table.push_str(&format!("({c:?}, {})\n", b.level));
                rows.push(json!({ "root": c, "level": b.level }));
            }
            table.push_str(&format!("{} inversions\n", set.len()));
            Ok(Output::ok(table, json!({ "element": s, "inversions": rows })))
        }
    }
}

fn cells(cmd: CellsCmd) -> Result<Output> {
    match cmd {
        CellsCmd::Dim { sys, coweight } => {
            let rs = sys.build()?;
            let lam = parse_coweight(&rs, &coweight)?;
            let d = rs.cell_dimension(&lam)?;
            Ok(Output::ok(format!("{d}\n"), json!({ "coweight": lam, "dimension": d })))
        }
        CellsCmd::Decompose { sys, coweight } => {
            let rs = sys.build()?;
            let lam = parse_coweight(&rs, &coweight)?;
            let dec = rs.decompose(&lam)?;
            let mut table = String::new();
            for c in &dec.cells {
                table.push_str(&format!("{}  dim {}\n", c.rep, c.dimension));
            }
            table.push_str(&format!(
                "poincare: {}\ncomponent: {}\n",
                dec.poincare_string(),
                dec.component_class
            ));
            let mut value = serde_json::to_value(&dec)?;
            value["poincare_string"] = json!(dec.poincare_string());
            Ok(Output::ok(table, value))
        }
        CellsCmd::Deform { sys, r } => {
            let rs = sys.build()?;
            let r: Vec<u64> = parse_ints(&r, "--r")?
                .into_iter()
                .map(|x| u64::try_from(x).map_err(|_| anyhow!("--r entries must be non-negative")))
                .collect::<Result<_>>()?;
            let d = rs.deformation_dimension(&r)?;
            Ok(Output::ok(format!("{d}\n"), json!({ "r": r, "dimension": d })))
        }
    }
}

fn wonderful(cmd: WonderfulCmd, seed: u64) -> Result<Output> {
    match cmd {
        WonderfulCmd::Action {
            sys,
            point,
            side,
            twist,
        } => {
            let rs = sys.build()?;
            let z = parse_point(&rs, &point)?;
            let map = match twist {
                Some(t) => {
                    let nu = rs.parse_weyl(&t).with_context(|| format!("--twist `{t}`"))?;
                    rs.twisted_action(&z, &nu)?
                }
                None => {
                    let side: Side = side.parse().with_context(|| format!("--side `{side}`"))?;
                    rs.infinitesimal_action(&z, side)?
                }
            };
            let (rows, cols) = rs.tangent_basis_labels();
            let mut table = format!("rows: {}\ncols: {}\n", rows.join(" "), cols.join(" "));
            for r in &map.matrix {
                table.push_str(&r.iter().map(|x| format!("{x:>5}")).collect::<Vec<_>>().join(" "));
                table.push('\n');
            }
            Ok(Output::ok(table, serde_json::to_value(&map)?))
        }
        WonderfulCmd::Check { sys, point } => {
            let rs = sys.build()?;
            let z = parse_point(&rs, &point)?;
            let c = rs.check_lr_transpose(&z)?;
            let witness = c
                .witness
                .as_ref()
                .map(|(i, j, a, b)| json!({ "row": i, "col": j, "left": a.to_string(), "right": b.to_string() }));
            let table = match &c.witness {
                None => "holds\n".to_string(),
                Some((i, j, a, b)) => format!("fails at ({i}, {j}): {a} != {b}\n"),
            };
            Ok(Output {
                table,
                json: json!({ "holds": c.holds, "witness": witness }),
                ok: c.holds,
            })
        }
        WonderfulCmd::Sweep { sys, random, transpose } => {
            let rs = sys.build()?;
            let r = rs.lr_transpose_sweep(random, transpose, seed)?;
            let ok = r.failures == 0 && r.transpose_mismatches == 0;
            let table = format!(
                "{}: {} boundary + {} random points, {} failures, {} transpose mismatches\n",
                r.label, r.boundary_points, r.random_points, r.failures, r.transpose_mismatches
            );
            Ok(Output {
                table,
                json: serde_json::to_value(&r)?,
                ok,
            })
        }
        WonderfulCmd::Inversion { sys, point } => {
            let rs = sys.build()?;
            let z = parse_point(&rs, &point)?;
            let img = rs.inversion_on_torus(&z)?;
            let text: Vec<String> = img.z.iter().map(|x| x.to_string()).collect();
            Ok(Output::ok(
                format!("({})\n", text.join(", ")),
                serde_json::to_value(&img)?,
            ))
        }
    }
}

fn scheme(cmd: SchemeCmd) -> Result<Output> {
    match cmd {
        SchemeCmd::Preset { family, rank, genus } => {
            let fam: Family = family.parse().with_context(|| format!("--family `{family}`"))?;
            let (rs, s) = preset(fam, rank, genus)?;
            let file = SchemeFile::from_scheme(&rs, &s);
            let value = serde_json::to_value(&file)?;
            Ok(Output::ok(serde_json::to_string_pretty(&value)? + "\n", value))
        }
        SchemeCmd::Verify { file, strict } => {
            let sf = read_scheme(&file)?;
            let (rs, s) = sf.resolve().context("invalid scheme file")?;
            let report = rs.verify(&s, mode(strict));
            Ok(Output {
                table: report.to_table(),
                json: serde_json::to_value(&report)?,
                ok: report.passed(),
            })
        }
        SchemeCmd::Search {
            sys,
            genus,
            coweights,
            generate,
            twists,
            strict,
            budget,
        } => {
            let rs = sys.build()?;
            let coweights = match coweights {
                Some(c) => Some(
                    parse_ints(&c, "--coweights")?
                        .into_iter()
                        .map(|i| {
                            if i < 1 || i as usize > rs.rank() {
                                Err(anyhow!("--coweights: index {i} is out of range 1..={}", rs.rank()))
                            } else {
                                Ok(i as usize - 1)
                            }
                        })
                        .collect::<Result<Vec<_>>>()?,
                ),
                None => None,
            };
            let pool = match (generate, twists) {
                (Some(g), _) => TwistPool::Generated(parse_elements(&rs, &g)?),
                (None, Some(t)) => TwistPool::Explicit(parse_elements(&rs, &t)?),
                (None, None) => TwistPool::Cosets,
            };
            let options = SearchOptions {
                coweights,
                pool,
                mode: mode(strict),
                node_budget: budget,
            };
            match search(&rs, genus, &options)? {
                SearchOutcome::Found { scheme, report, nodes } => {
                    let file = SchemeFile::from_scheme(&rs, &scheme);
                    let table = format!(
                        "found after {nodes} nodes\n{}\n{}",
                        serde_json::to_string_pretty(&file)?,
                        report.to_table()
                    );
                    Ok(Output::ok(
                        table,
                        json!({ "outcome": "found", "nodes": nodes, "scheme": file, "report": report }),
                    ))
                }
                SearchOutcome::Infeasible(cert) => {
                    let table = match &cert {
                        Certificate::ParameterCount { target, parameters } => {
                            format!("INFEASIBLE: {target} is not a nonnegative combination of {parameters:?}\n")
                        }
                        Certificate::Aggregate(r) => format!("INFEASIBLE by aggregate screen\n{}", r.to_table()),
                        Certificate::Exhausted { nodes, variables } => {
                            format!("INFEASIBLE within the pool: {variables} variables exhausted after {nodes} nodes\n")
                        }
                    };
                    Ok(Output {
                        table,
                        json: json!({ "outcome": "infeasible", "certificate": cert }),
                        ok: false,
                    })
                }
            }
        }
        SchemeCmd::Obstruct { sys, genus } => {
            let rs = sys.build()?;
            let r = rs.obstruction_analysis(genus);
            Ok(Output {
                table: r.to_table(),
                json: serde_json::to_value(&r)?,
                ok: !r.is_infeasible(),
            })
        }
    }
}

fn suite() -> Result<Output> {
    let mut rows = Vec::new();
    let mut table = String::from("check                         result\n");
    let mut all = true;
    let mut record = |name: String, ok: bool, detail: String, table: &mut String| {
        all &= ok;
        table.push_str(&format!("{name:<30}{}  {detail}\n", if ok { "PASS" } else { "FAIL" }));
        rows.push(json!({ "check": name, "pass": ok, "detail": detail }));
    };

    let mut grid = vec![(Family::A3, 3usize)];
    grid.extend((2..=6).map(|l| (Family::Cl, l)));
    grid.extend((4..=7).map(|l| (Family::Dl, l)));
    for (family, l) in grid {
        for g in [2u64, 4] {
            let (rs, s) = preset(family, l, g)?;
            let r = rs.verify(&s, DegreeMode::Exact);
            record(
                format!("preset {} g={g}", rs.label()),
                r.passed() && r.top_type_trivial,
                format!("N={} M={}", r.param_count.n, r.total_points),
                &mut table,
            );
        }
    }
    let g2 = RootSystem::from_label("G2", 2)?;
    for g in 1..=6 {
        let r = g2.obstruction_analysis(g);
        record(
            format!("G2 obstruction g={g}"),
            r.is_infeasible(),
            format!("{:?}", r.verdict).to_uppercase(),
            &mut table,
        );
    }
    for l in 2..=8 {
        let rs = RootSystem::from_label("C", l)?;
        let nu = c_rotation(&rs)?;
        let det = rs.kernel_orbit_determinant(&nu, 0)?;
        let stated = stated_c_determinant(l);
        record(
            format!("C{l} determinant"),
            det == stated,
            format!("computed {det}, stated {stated}"),
            &mut table,
        );
    }
    Ok(Output {
        table,
        json: json!({ "checks": rows, "all_pass": all }),
        ok: all,
    })
}

fn run(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Rootsys(c) => rootsys(c),
        Command::Weyl(c) => weyl(c),
        Command::Affine(c) => affine(c),
        Command::Cells(c) => cells(c),
        Command::Wonderful(c) => wonderful(c, cli.seed),
        Command::Scheme(c) => scheme(c),
        Command::Suite => suite(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("HECKE_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.table);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
