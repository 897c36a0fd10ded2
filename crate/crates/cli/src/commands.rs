use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use hefcheck::elementary::{is_elementary_bruteforce, ElementaryError, ElementaryVerdict};
use hefcheck::hef::{is_hef, verify_certificate, HefStatus, Limits};
use hefcheck::reduction::{build_reduction, cross_validate, CrossVerdict};
use hefcheck::semantics::{shift, stable_models, SemanticsError};
use hefcheck::text::{
    certificate_from_json, certificate_to_json, parse_dimacs, parse_program, program_sha256,
    render_program, render_rule, CertificateError, CertificateJson, Cnf3,
};
use hefcheck::{is_hcf, AtomSet, DepGraph, Program};
use serde::Serialize;

use crate::exit::{HOLDS, RESOURCE_LIMIT, VIOLATED};
use crate::report::*;
use crate::{Cli, Command, Format, Mode};

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Check {
            file,
            mode,
            certificate,
            dot,
        } => {
            let program = load_program(file)?;
            if let Some(path) = dot {
                write_file(path, &DepGraph::build(&program).to_dot(&program))?;
            }
            match mode {
                Mode::Hcf => check_hcf(cli, &program),
                Mode::Hef => check_hef(cli, &program, certificate.as_deref()),
            }
        }
        Command::Elementary { file, set } => elementary(cli, &load_program(file)?, set),
        Command::Verify { file, certificate } => verify(cli, &load_program(file)?, certificate),
        Command::Stable { file } => stable(cli, &load_program(file)?),
        Command::Shift { file } => {
            print!("{}", render_program(&shift(&load_program(file)?)));
            Ok(HOLDS)
        }
        Command::Reduce { cnf, output } => {
            let formula = load_cnf(cnf)?;
            let text = render_program(&build_reduction(&formula).0);
            match output {
                Some(path) => write_file(path, &text)?,
                None => print!("{text}"),
            }
            Ok(HOLDS)
        }
        Command::Xvalidate { cnf, report } => xvalidate(cli, cnf, report.as_deref()),
    }
}

fn limits(cli: &Cli) -> Limits {
    Limits {
        max_atoms: cli.max_atoms as usize,
        max_subset: cli.max_subset as usize,
        deadline: None,
    }
    .with_time_budget(Duration::from_secs(cli.time_budget))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_program(path: &Path) -> Result<Program> {
    let text = read(path)?;
    parse_program(&text).map_err(|err| anyhow::anyhow!("{}:{err}", path.display()))
}

fn load_cnf(path: &Path) -> Result<Cnf3> {
    let text = read(path)?;
    let formula = parse_dimacs(&text).map_err(|err| anyhow::anyhow!("{}:{err}", path.display()))?;
    for i in formula.tautological_clauses() {
        eprintln!(
            "warning: {}: clause {i} contains a variable and its negation",
            path.display()
        );
    }
    Ok(formula)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn names(program: &Program, set: &AtomSet) -> String {
    format!("{{{}}}", program.sorted_names(set).join(", "))
}

fn check_hcf(cli: &Cli, program: &Program) -> Result<u8> {
    let verdict = is_hcf(program);
    let violation = verdict.violation.map(|(rule, a, b)| {
        (
            rule,
            [program.name(a).to_string(), program.name(b).to_string()],
        )
    });
    if cli.format == Format::Json {
        print_json(&HcfReport {
            version: REPORT_VERSION,
            program_sha256: program_sha256(program),
            mode: "hcf",
            status: if violation.is_some() {
                "not_hcf"
            } else {
                "hcf"
            },
            violating_rule: violation.as_ref().map(|v| v.0),
            atoms: violation.as_ref().map(|v| v.1.clone()),
        })?;
    } else if let Some((rule, [a, b])) = &violation {
        println!("not_hcf");
        println!("rule {rule}: {}", render_rule(program, program.rule(*rule)));
        println!("head atoms {a} and {b} share a strongly connected component");
    } else {
        println!("hcf");
    }
    Ok(if violation.is_some() { VIOLATED } else { HOLDS })
}

fn check_hef(cli: &Cli, program: &Program, cert_path: Option<&Path>) -> Result<u8> {
    let verdict = is_hef(program, &limits(cli));
    let cert_json = verdict
        .certificate
        .as_ref()
        .map(|c| certificate_to_json(program, c));
    if let (Some(path), Some(json)) = (cert_path, &cert_json) {
        write_file(path, &(serde_json::to_string_pretty(json)? + "\n"))?;
    }
    if cli.format == Format::Json {
        print_json(&HefReport {
            version: REPORT_VERSION,
            program_sha256: program_sha256(program),
            mode: "hef",
            status: verdict.status.as_str(),
            certificate: cert_json,
            limit: verdict.limit.clone(),
            stats: verdict.stats,
        })?;
    } else {
        println!("{}", verdict.status.as_str());
        match (&verdict.certificate, &verdict.limit) {
            (Some(cert), _) => {
                println!("E = {}", names(program, &cert.elementary_set));
                println!(
                    "violating rule {}: {}",
                    cert.violating_rule,
                    render_rule(program, program.rule(cert.violating_rule))
                );
                println!("witness:");
                for rule in cert.witness.rules() {
                    println!("  {}", render_rule(&cert.witness, rule));
                }
            }
            (None, Some(limit)) => println!("limit: {limit}"),
            (None, None) => {}
        }
        let s = verdict.stats;
        println!(
            "candidates: {}, pruned by connectivity: {}, pruned by support: {}, elementary checks: {}",
            s.candidates, s.pruned_connectivity, s.pruned_support, s.elementary_checks
        );
    }
    Ok(match verdict.status {
        HefStatus::Hef => HOLDS,
        HefStatus::NotHef => VIOLATED,
        HefStatus::ResourceLimit => RESOURCE_LIMIT,
    })
}

fn elementary(cli: &Cli, program: &Program, set: &[String]) -> Result<u8> {
    let y = program.atom_set(set)?;
    let verdict = match is_elementary_bruteforce(&y, program, cli.max_subset as usize) {
        Ok(v) => v,
        Err(err @ ElementaryError::CapExceeded { .. }) => {
            eprintln!("{err}");
            return Ok(RESOURCE_LIMIT);
        }
        Err(err) => bail!(err),
    };
    let failing = match &verdict {
        ElementaryVerdict::Elementary => None,
        ElementaryVerdict::NotElementary { subset } => Some(subset),
    };
    if cli.format == Format::Json {
        print_json(&ElementaryReport {
            version: REPORT_VERSION,
            set: program.sorted_names(&y),
            elementary: failing.is_none(),
            failing_subset: failing.map(|s| program.sorted_names(s)),
        })?;
    } else if let Some(subset) = failing {
        println!("not elementary");
        println!(
            "{} is not outbound in {}",
            names(program, subset),
            names(program, &y)
        );
    } else {
        println!("elementary");
    }
    Ok(if failing.is_some() { VIOLATED } else { HOLDS })
}

fn verify(cli: &Cli, program: &Program, path: &Path) -> Result<u8> {
    let text = read(path)?;
    let json: CertificateJson = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a certificate", path.display()))?;
    let check = match certificate_from_json(program, &json) {
        Ok(cert) => verify_certificate(program, &cert),
        Err(err @ (CertificateError::Version(_) | CertificateError::Status(_))) => bail!(err),
        Err(err) => hefcheck::WitnessCheck {
            valid: false,
            reason: Some(err.to_string()),
        },
    };
    if cli.format == Format::Json {
        print_json(&VerifyReport {
            version: REPORT_VERSION,
            valid: check.valid,
            reason: check.reason.clone(),
        })?;
    } else if check.valid {
        println!("valid");
    } else {
        println!("invalid: {}", check.reason.as_deref().unwrap_or("rejected"));
    }
    Ok(if check.valid { HOLDS } else { VIOLATED })
}

fn stable(cli: &Cli, program: &Program) -> Result<u8> {
    let models = match stable_models(program, cli.max_subset as usize) {
        Ok(models) => models,
        Err(err @ SemanticsError::CapExceeded { .. }) => {
            eprintln!("{err}");
            return Ok(RESOURCE_LIMIT);
        }
    };
    let models: Vec<Vec<String>> = models.iter().map(|m| program.sorted_names(m)).collect();
    if cli.format == Format::Json {
        print_json(&StableReport {
            version: REPORT_VERSION,
            models,
        })?;
    } else {
        for m in models {
            println!("{}", m.join(" "));
        }
    }
    Ok(HOLDS)
}

fn xvalidate(cli: &Cli, paths: &[std::path::PathBuf], report_path: Option<&Path>) -> Result<u8> {
    let formulas = paths
        .iter()
        .map(|p| load_cnf(p).map(|f| (p, f)))
        .collect::<Result<Vec<_>>>()?;
    let mut reports = Vec::with_capacity(formulas.len());
    for (path, formula) in &formulas {
        let result = cross_validate(formula, &limits(cli));
        if cli.format == Format::Text {
            let sat = match result.satisfiable {
                Some(true) => "sat",
                Some(false) => "unsat",
                None => "unknown",
            };
            let verdict = match result.verdict {
                CrossVerdict::Consistent => "consistent",
                CrossVerdict::Mismatch => "MISMATCH",
                CrossVerdict::Inconclusive => "inconclusive",
            };
            println!(
                "{}: {sat} {} {verdict}",
                path.display(),
                result.hef_status.as_str()
            );
        }
        reports.push(FormulaReport {
            file: path.display().to_string(),
            result,
        });
    }
    let mismatch = reports
        .iter()
        .any(|r| r.result.verdict == CrossVerdict::Mismatch);
    let inconclusive = reports
        .iter()
        .any(|r| r.result.verdict == CrossVerdict::Inconclusive);
    let report = XvalidateReport {
        version: REPORT_VERSION,
        all_consistent: !mismatch && !inconclusive,
        formulas: reports,
    };
    if let Some(path) = report_path {
        write_file(path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    if cli.format == Format::Json {
        print_json(&report)?;
    }
    Ok(if mismatch {
        VIOLATED
    } else if inconclusive {
        RESOURCE_LIMIT
    } else {
        HOLDS
    })
}
