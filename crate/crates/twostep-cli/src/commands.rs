//! One function per subcommand, each returning a [`Report`] (plus the
//! mismatch diff for reproductions).

use serde_json::{json, Value};
use twostep::exactla::{parse_rational, render_rational, Field, Fp, Q};
use twostep::fixtures::{load, Fixture};
use twostep::ideals::{make_nesting, minimal_generators, sample_batch, sample_nested, sample_two_step, GradedIdeal, IdealError, SamplerConfig};
use twostep::landscape::{critical_point, delta, potential_tnt_area, theta};
use twostep::poly::Form;
use twostep::profiles::{classify, expected_tangent_dims, smoothable_dim, NestedProfile, TwoStepProfile};
use twostep::search::{find_certificates, minimal_sequences, Certificate, Strategy};
use twostep::tangent::{nested_tangent_report, tangent_report, TangentReport};
use twostep::Exec;

use crate::args::{AreaArgs, DeltaArgs, ReproArgs, SampleArgs, SearchArgs, StrategyArg, SubjectArgs, ThetaArgs};
use crate::error::CliError;
use crate::output::{tuple, Report, Table};
use crate::repro;

/// A rendered result and, for reproductions, the lines of a failing diff.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub diff: Vec<String>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, diff: Vec::new() }
    }
}

fn rational(text: &str) -> Result<Q, CliError> {
    parse_rational(text).ok_or_else(|| CliError::Usage(format!("{text:?} is not an integer or a fraction p/q")))
}

fn rationals(xs: &[Q]) -> Vec<String> {
    xs.iter().map(render_rational).collect()
}

pub fn cmd_delta(a: &DeltaArgs) -> Result<Outcome, CliError> {
    if a.critical {
        if !a.point.is_empty() {
            return Err(CliError::Usage("--critical takes no coordinates".into()));
        }
        let rep = critical_point(a.n, a.r, a.k).map_err(CliError::usage)?;
        let mut t = Table::new(&["quantity", "value"]).titled(format!("critical point of Δ_{},{},{}", a.n, a.r, a.k));
        let point = if rep.point.is_empty() {
            "none (singular Hessian)".to_string()
        } else {
            tuple(&rationals(&rep.point))
        };
        t.push(vec!["point".into(), point]);
        t.push(vec!["value".into(), rep.value.as_ref().map_or("—".into(), render_rational)]);
        t.push(vec!["det Hessian".into(), rep.hessian_det.clone()]);
        t.push(vec!["nature".into(), format!("{:?}", rep.nature).to_lowercase()]);
        let json = serde_json::to_value(&rep).expect("report serializes");
        return Ok(Report::new(json).with_table(t).into());
    }
    let need = 2 * a.r;
    if a.point.len() != need {
        return Err(CliError::Usage(format!(
            "Δ_{{n,r,k}} with r = {} takes {need} coordinates, got {}",
            a.r,
            a.point.len()
        )));
    }
    let point = a.point.iter().map(|s| rational(s)).collect::<Result<Vec<_>, _>>()?;
    let value = delta(a.n, a.r, a.k, &point).map_err(CliError::usage)?;
    let shown = render_rational(&value);
    let json = json!({"n": a.n, "r": a.r, "k": a.k, "point": rationals(&point), "delta": shown});
    Ok(Report::scalar(json, "delta", shown).into())
}

pub fn cmd_theta(a: &ThetaArgs) -> Result<Outcome, CliError> {
    let (hk, hk1) = (rational(&a.hk)?, rational(&a.hk1)?);
    if a.n < 2 || a.k < 1 {
        return Err(CliError::Usage(format!("need n ≥ 2 and k ≥ 1 (got n = {}, k = {})", a.n, a.k)));
    }
    let shown = render_rational(&theta(a.n, a.k, a.b, &hk, &hk1));
    let json = json!({"n": a.n, "k": a.k, "b": a.b, "h_k": render_rational(&hk), "h_k1": render_rational(&hk1), "theta": shown});
    Ok(Report::scalar(json, "theta", shown).into())
}

pub fn cmd_area(a: &AreaArgs, exec: Exec) -> Result<Outcome, CliError> {
    if a.n < 2 || a.k < 1 {
        return Err(CliError::Usage(format!("need n ≥ 2 and k ≥ 1 (got n = {}, k = {})", a.n, a.k)));
    }
    let pairs = potential_tnt_area(a.n, a.k, exec);
    let mut t = Table::new(&["h_k", "h_k+1"]).titled(format!("potential TNT area, n={} k={}", a.n, a.k));
    for &(x, y) in &pairs {
        t.push(vec![x.to_string(), y.to_string()]);
    }
    let json = json!({"n": a.n, "k": a.k, "pairs": pairs.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>()});
    Ok(Report::new(json)
        .with_table(t)
        .with_note(format!("{} lattice pairs", pairs.len()))
        .into())
}

fn certificate_row(c: &Certificate) -> Vec<String> {
    vec![
        c.n.to_string(),
        c.r.to_string(),
        c.k.to_string(),
        tuple(&c.point),
        render_rational(&c.delta),
        c.dim_bound.to_string(),
        tuple(&c.colengths),
    ]
}

const CERTIFICATE_COLUMNS: [&str; 7] = ["n", "r", "k", "point", "delta", "dim_bound", "colengths"];

pub fn cmd_search(a: &SearchArgs, exec: Exec) -> Result<Outcome, CliError> {
    let strategy = match a.strategy {
        StrategyArg::Exhaustive => Strategy::Exhaustive,
        StrategyArg::Hypercube => Strategy::Hypercube { cap: a.cap },
    };
    let mut rep = find_certificates(a.n, a.r, a.k, strategy, exec).map_err(CliError::usage)?;
    if a.minimal {
        rep.certificates = minimal_sequences(&rep.certificates, false);
    }
    let mut t = Table::new(&CERTIFICATE_COLUMNS);
    for c in &rep.certificates {
        t.push(certificate_row(c));
    }
    let mut json = serde_json::to_value(&rep).expect("report serializes");
    json["minimal_only"] = Value::from(a.minimal);
    let mut report = Report::new(json)
        .with_table(t)
        .with_note(format!("{} certificates", rep.certificates.len()));
    if let Strategy::Hypercube { cap } = strategy {
        report = report.with_note(format!(
            "hypercube: {} shells explored{}",
            rep.shells_explored,
            if rep.cap_bound {
                format!(", stopped by the cap {cap}")
            } else {
                String::new()
            }
        ));
    }
    Ok(report.into())
}

/// The ideals under study and a label saying where they came from.
struct Subject<F> {
    label: String,
    seed: Option<u64>,
    levels: Vec<GradedIdeal<F>>,
}

fn load_subject<F: Field>(
    a: &SubjectArgs,
    lift: impl Fn(&GradedIdeal<Q>) -> Result<GradedIdeal<F>, IdealError>,
) -> Result<Subject<F>, CliError> {
    if let Some(name) = &a.fixture {
        let fixture = load(name).map_err(CliError::usage)?;
        let levels = match fixture {
            Fixture::Ideal(i) => vec![lift(&i)?],
            Fixture::Nesting(n) => n.ideals().iter().map(&lift).collect::<Result<_, _>>()?,
        };
        return Ok(Subject {
            label: format!("fixture {name}"),
            seed: None,
            levels,
        });
    }
    let text = a.profile.as_deref().unwrap_or_default();
    let cfg = SamplerConfig::default();
    let levels = if text.contains('[') {
        let np: NestedProfile = text.parse().map_err(CliError::usage)?;
        sample_nested::<F>(&np, a.seed, &cfg)?.ideals().to_vec()
    } else {
        let p: TwoStepProfile = text.parse().map_err(CliError::usage)?;
        vec![sample_two_step::<F>(&p, a.seed, &cfg)?]
    };
    Ok(Subject {
        label: format!("generic sample of {text}"),
        seed: Some(a.seed),
        levels,
    })
}

fn tangent_of<F: Field>(levels: &[GradedIdeal<F>], exec: Exec) -> Result<TangentReport, CliError> {
    match levels {
        [one] => Ok(tangent_report(one, exec)),
        _ => Ok(nested_tangent_report(&make_nesting(levels.to_vec())?, exec)),
    }
}

fn field_name(exact: bool) -> &'static str {
    if exact {
        "Q"
    } else {
        "F_p, p = 2^61 - 1"
    }
}

/// Everything `certify` and `tangent` print, computed over one field.
fn analyze<F: Field>(s: &Subject<F>, exact: bool, exec: Exec, with_certificate: bool) -> Result<Report, CliError> {
    let tangent = tangent_of(&s.levels, exec)?;
    let profiles: Vec<TwoStepProfile> = s.levels.iter().map(GradedIdeal::profile).collect();
    let hfs: Vec<Vec<usize>> = s.levels.iter().map(|i| i.hilbert_function().values).collect();
    let colengths: Vec<usize> = s.levels.iter().map(GradedIdeal::colength).collect();
    let mut json = json!({
        "subject": s.label,
        "seed": s.seed,
        "field": field_name(exact),
        "hilbert_functions": hfs,
        "colengths": colengths,
        "profiles": profiles,
        "regimes": profiles.iter().map(classify).collect::<Vec<_>>(),
        "tangent": tangent,
    });

    let mut t = Table::new(&["quantity", "value"]).titled(s.label.clone());
    let hv: Vec<String> = hfs.iter().map(|h| tuple(h)).collect();
    t.push(vec!["Hilbert vector".into(), format!("({})", hv.join(","))]);
    t.push(vec!["colengths".into(), tuple(&colengths)]);
    let regimes: Vec<&str> = profiles.iter().map(|p| classify(p).label()).collect();
    t.push(vec!["regimes".into(), regimes.join(", ")]);
    t.push(vec!["field".into(), field_name(exact).into()]);
    for (deg, dim) in &tangent.dims {
        t.push(vec![format!("dim T^{deg}"), dim.to_string()]);
    }
    t.push(vec!["T<0 total".into(), tangent.t_neg_total.to_string()]);
    t.push(vec!["derivation rank".into(), tangent.derivation_rank.to_string()]);
    t.push(vec!["TNT".into(), tangent.tnt.to_string()]);

    if with_certificate {
        let first = profiles[0];
        if let [p] = profiles.as_slice() {
            let e = expected_tangent_dims(p);
            json["expected"] = json!({"t1": e.t1, "t0_lower": e.t0_lower});
            t.push(vec!["expected T^1 = h_k·q_k+1".into(), e.t1.to_string()]);
            t.push(vec!["T^0 lower bound".into(), e.t0_lower.to_string()]);
        }
        let point: Vec<usize> = profiles.iter().flat_map(|p| [p.hk, p.hk1]).collect();
        let cert = Certificate::at(first.n, profiles.len(), first.k, &point);
        let d = *colengths.last().expect("at least one level");
        t.push(vec!["smoothable n·d".into(), smoothable_dim(first.n, d).to_string()]);
        match &cert {
            Some(c) => {
                t.push(vec!["certificate Δ".into(), render_rational(&c.delta)]);
                t.push(vec!["stratum bound".into(), c.dim_bound.to_string()]);
            }
            None => t.push(vec!["certificate".into(), "none (Δ < 0 or outside the formula's range)".into()]),
        }
        json["certificate"] = serde_json::to_value(&cert).expect("certificate serializes");
    }
    Ok(Report::new(json).with_table(t))
}

fn subject_report(a: &SubjectArgs, exec: Exec, with_certificate: bool) -> Result<Outcome, CliError> {
    let report = if a.exact {
        analyze(&load_subject::<Q>(a, |i| Ok(i.clone()))?, true, exec, with_certificate)?
    } else {
        analyze(&load_subject::<Fp>(a, GradedIdeal::to_fp)?, false, exec, with_certificate)?
    };
    Ok(report.into())
}

pub fn cmd_certify(a: &SubjectArgs, exec: Exec) -> Result<Outcome, CliError> {
    subject_report(a, exec, true)
}

pub fn cmd_tangent(a: &SubjectArgs, exec: Exec) -> Result<Outcome, CliError> {
    subject_report(a, exec, false)
}

fn generator_rows<F: Field>(sample: usize, level: usize, i: &GradedIdeal<F>, t: &mut Table) {
    for (offset, gens) in minimal_generators(i).iter().enumerate() {
        let d = i.k() + offset;
        for g in gens {
            let form = Form::from_dense(i.n(), d, g.clone());
            t.push(vec![sample.to_string(), level.to_string(), d.to_string(), form.to_string()]);
        }
    }
}

pub fn cmd_sample(a: &SampleArgs, exec: Exec) -> Result<Outcome, CliError> {
    let cfg = SamplerConfig::default();
    let mut t = Table::new(&["sample", "level", "degree", "generator"]).titled(format!("generators of {}", a.profile));
    let samples: Vec<Value> = if a.profile.contains('[') {
        let np: NestedProfile = a.profile.parse().map_err(CliError::usage)?;
        let seeds: Vec<u64> = (0..a.count as u64).map(|i| a.seed.wrapping_add(i)).collect();
        let nests = exec.map(seeds, |s| sample_nested::<Q>(&np, s, &cfg));
        let mut out = Vec::new();
        for (idx, nest) in nests.into_iter().enumerate() {
            let nest = nest?;
            for (level, i) in nest.ideals().iter().enumerate() {
                generator_rows(idx, level, i, &mut t);
            }
            out.push(serde_json::to_value(&nest).expect("nesting serializes"));
        }
        out
    } else {
        let p: TwoStepProfile = a.profile.parse().map_err(CliError::usage)?;
        let mut out = Vec::new();
        for (idx, i) in sample_batch::<Q>(&p, a.seed, a.count, &cfg, exec).into_iter().enumerate() {
            let i = i?;
            generator_rows(idx, 0, &i, &mut t);
            out.push(serde_json::to_value(&i).expect("ideal serializes"));
        }
        out
    };
    let json = json!({"profile": a.profile, "seed": a.seed, "count": a.count, "samples": samples});
    Ok(Report::new(json).with_table(t).into())
}

pub fn cmd_repro(a: &ReproArgs, exec: Exec) -> Result<Outcome, CliError> {
    let rep = repro::run(a.target, a.seed, exec)?;
    Ok(Outcome {
        report: rep.to_report(),
        diff: rep.diff(),
    })
}
