//! Command-line front end. Every verb reads JSON documents (or catalog
//! names), runs one pipeline and prints one JSON value.
//!
//! Exit status: 0 on success, 1 on user error, 2 when a size bound was
//! exceeded, 3 on an internal verification failure or a failed reproduction
//! check.

pub mod reproduce;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cohomology::{profile, SubgroupMode};
use crate::error::{Error, Result};
use crate::groups::{
    abelian_decomposition, abelian_normal_cyclic_quotient, all_sylow_cyclic, group_to_value, parse_group,
    zgroup_presentation, FiniteGroup,
};
use crate::lattices::{parse_lattice, GLattice};
use crate::monomial::parse_monomial_action;
use crate::resolutions::{flabby_resolution, is_invertible};
use crate::verdict::{
    monomial_instance_verdict, monomial_universal_verdict, multiplicative_verdict, noether_verdict, torus_verdict,
    FieldDescriptor, FieldKind,
};

pub const EXIT_USER: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "flasque", version, about = "Integral representations, flabby resolutions and rationality verdicts")]
pub struct Cli {
    /// Write the result to this file (atomically) instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural data of a group.
    GroupInfo {
        #[arg(long)]
        group: String,
    },
    /// Ĥ⁻¹ and H¹ of a lattice over its subgroups.
    Cohomology {
        #[arg(long)]
        lattice: String,
        #[arg(long, value_enum, default_value = "prime-power")]
        subgroups: Subgroups,
    },
    /// A flabby resolution 0 → M → P → F → 0.
    Resolve {
        #[arg(long)]
        lattice: String,
    },
    /// Decide whether a lattice is invertible.
    Invertible {
        #[arg(long)]
        lattice: String,
    },
    /// Retract rationality of k(G).
    VerdictNoether {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Retract rationality of the torus with the given character lattice.
    VerdictTorus {
        #[arg(long)]
        lattice: String,
    },
    /// Retract rationality of k(M)^G.
    VerdictMultiplicative {
        #[arg(long)]
        lattice: String,
        /// Optional; must agree with the lattice's group.
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Monomial actions: `--group` asks about all actions over C, `--action`
    /// about one action.
    VerdictMonomial {
        #[arg(long, conflicts_with = "action", required_unless_present = "action")]
        group: Option<String>,
        #[arg(long)]
        action: Option<String>,
        #[arg(long)]
        field: Option<String>,
    },
    /// Run a reproduction suite.
    Reproduce {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// The lattice I_q, q = 2^n: cohomology, resolution, invertibility, torus verdict.
    Voskresenskii {
        #[arg(long)]
        n: u32,
    },
    /// Flabby classes of random lattices over groups with cyclic Sylow subgroups.
    EndoMiyata {
        #[arg(long, default_value_t = 12)]
        max_order: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Subgroups {
    PrimePower,
    All,
}

impl From<Subgroups> for SubgroupMode {
    fn from(s: Subgroups) -> Self {
        match s {
            Subgroups::PrimePower => SubgroupMode::PrimePower,
            Subgroups::All => SubgroupMode::All,
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USER } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (value, ok) = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let mut text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    text.push('\n');
    let written = match &cli.out {
        Some(path) => write_atomically(path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()).map_err(Error::from),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USER;
    }
    if ok {
        0
    } else {
        let _ = writeln!(stderr, "reproduction failed");
        EXIT_FAILURE
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Internal(_) => EXIT_FAILURE,
        _ => EXIT_USER,
    }
}

fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path.file_name().ok_or_else(|| Error::invalid(format!("--out {path:?} is not a file path")))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let res = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(res?)
}

/// An argument is inline JSON, a path to a JSON file, or a name.
fn load(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(serde_json::from_str(arg)?);
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path)?;
        return Ok(serde_json::from_str(&text)?);
    }
    if arg.ends_with(".json") {
        return Err(Error::invalid(format!("cannot read {arg}: no such file")));
    }
    Ok(Value::String(arg.to_string()))
}

fn load_group(arg: &str) -> Result<Arc<FiniteGroup>> {
    Ok(Arc::new(parse_group(&load(arg)?)?))
}

fn load_lattice(arg: &str) -> Result<GLattice> {
    parse_lattice(&load(arg)?)
}

pub fn parse_field(arg: &str) -> Result<FieldDescriptor> {
    match arg {
        "Q" => Ok(FieldDescriptor::rationals()),
        "C" => Ok(FieldDescriptor::complex()),
        _ => match arg.strip_prefix("custom:") {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                FieldDescriptor::from_value(&serde_json::from_str(&text)?)
            }
            None => Err(Error::invalid(format!("unknown field {arg:?}; use Q, C or custom:<file>"))),
        },
    }
}

/// Runs a command; the flag is false when a reproduction check failed.
pub fn execute(cmd: &Command) -> Result<(Value, bool)> {
    let v = match cmd {
        Command::GroupInfo { group } => group_info(&load_group(group)?)?,
        Command::Cohomology { lattice, subgroups } => profile(&load_lattice(lattice)?, (*subgroups).into())?.to_value(),
        Command::Resolve { lattice } => {
            let res = flabby_resolution(&load_lattice(lattice)?)?;
            let mut v = res.to_value();
            v["p_stabilizers"] = json!(res.p_stabilizers.iter().map(|s| s.members().to_vec()).collect::<Vec<_>>());
            v
        }
        Command::Invertible { lattice } => is_invertible(&load_lattice(lattice)?)?.to_value(),
        Command::VerdictNoether { group, field } => {
            noether_verdict(&*load_group(group)?, &parse_field(field)?)?.to_value()
        }
        Command::VerdictTorus { lattice } => torus_verdict(&load_lattice(lattice)?)?.to_value(),
        Command::VerdictMultiplicative { lattice, group, field } => {
            let m = load_lattice(lattice)?;
            if let Some(g) = group {
                if load_group(g)?.canonical_key() != m.group().canonical_key() {
                    return Err(Error::invalid("--group does not match the lattice's group"));
                }
            }
            multiplicative_verdict(&m, &parse_field(field)?)?.to_value()
        }
        Command::VerdictMonomial { group, action, field } => match (group, action) {
            (Some(g), None) => {
                if let Some(f) = field {
                    if parse_field(f)?.kind() != FieldKind::Complex {
                        return Err(Error::invalid("the verdict over all monomial actions is only available over C"));
                    }
                }
                monomial_universal_verdict(&*load_group(g)?).to_value()
            }
            (None, Some(a)) => {
                let a = parse_monomial_action(&load(a)?)?;
                let k = parse_field(field.as_deref().unwrap_or("Q"))?;
                monomial_instance_verdict(&a, &k)?.to_value()
            }
            _ => return Err(Error::invalid("give exactly one of --group and --action")),
        },
        Command::Reproduce { suite } => {
            let report = match suite {
                Suite::Voskresenskii { n } => reproduce::voskresenskii(*n)?,
                Suite::EndoMiyata { max_order, trials, seed } => reproduce::endo_miyata(*max_order, *trials, *seed)?,
            };
            return Ok((report.to_value(), report.passed()));
        }
    };
    Ok((v, true))
}

fn group_info(g: &Arc<FiniteGroup>) -> Result<Value> {
    let members = |s: &crate::groups::Subgroup| s.members().to_vec();
    let mut v = json!({
        "group": group_to_value(g),
        "order": g.order(),
        "exponent": g.exponent(),
        "abelian": g.is_abelian(),
        "cyclic": g.is_cyclic(),
        "generators": g.generators(),
        "element_orders": g.element_orders(),
        "subgroup_count": g.subgroups()?.len(),
        "subgroup_class_representatives": g.subgroup_class_representatives()?.iter().map(members).collect::<Vec<_>>(),
        "normal_subgroups": g.normal_subgroups()?.iter().map(members).collect::<Vec<_>>(),
        "all_sylow_cyclic": all_sylow_cyclic(g),
        "zgroup_presentation": zgroup_presentation(g),
        "abelian_normal_cyclic_quotient": abelian_normal_cyclic_quotient(g)?.map(|w| json!({
            "subgroup": w.subgroup.members(),
            "tau": w.tau,
            "e_prime": w.e_prime,
        })),
    });
    if let Some(n) = g.name() {
        v["name"] = json!(n);
    }
    if g.is_abelian() {
        v["abelian_invariants"] = json!(abelian_decomposition(g)?);
    }
    Ok(v)
}
