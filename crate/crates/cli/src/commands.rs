use std::error::Error;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use parkmodel::census::{CensusConfig, CensusKernel};
use parkmodel::circular::verify_circular;
use parkmodel::montecarlo::tuple_space_size;
use parkmodel::verify::{
    compare_naples_semantics, verify_characterizations, verify_direction_total, verify_dyadic,
    verify_monotonicity, verify_odd_census, verify_recursion_brute_force, verify_sandwich,
    verify_staircase_formula,
};
use parkmodel::{
    estimate_expected_total, estimate_prob, expected_random_direction, expected_random_naples,
    full_census_with, odd_tuple_for, prob_model1, prob_model2, tuple_for_dyadic, Model,
    NaplesSemantics, ParkError, PolyP, PreferenceTuple, RecursionCache,
};
use serde_json::{json, Map, Value};

use crate::format::{
    big_json, coeffs_json, coeffs_str, decimal_str, document, print_csv, print_json, rational_json,
    rational_str, with_fields, Format,
};
use crate::{
    CensusArgs, Check, ConstructArgs, McArgs, ModelArg, Outcome, ProbArgs, SemanticsArg, TableArgs,
    VerifyArgs,
};

type CmdResult = Result<Outcome, Box<dyn Error>>;

fn exact_prob(
    alpha: &PreferenceTuple,
    model: ModelArg,
    k: u32,
    semantics: SemanticsArg,
) -> parkmodel::Result<PolyP> {
    match model {
        ModelArg::Direction => prob_model1(alpha),
        ModelArg::Naples => prob_model2(alpha, k, semantics.into()),
    }
}

fn check_probability(p: &BigRational) -> parkmodel::Result<()> {
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(ParkError::ProbabilityOutOfRange(rational_str(p)));
    }
    Ok(())
}

pub fn prob(a: &ProbArgs) -> CmdResult {
    let tuple = PreferenceTuple::linear(&a.alpha.0)?;
    let poly = exact_prob(&tuple, a.model, a.k, a.semantics)?;
    let alpha = tuple.to_string();
    let params = json!({
        "alpha": alpha,
        "model": a.model.name(),
        "k": a.k,
        "semantics": a.semantics.name(),
        "p": a.p.as_ref().map(rational_str),
    });
    let Some(p) = &a.p else {
        match a.format {
            Format::Text => println!("{poly}\n{}", coeffs_str(&poly)),
            Format::Csv => print_csv(
                &["alpha", "model", "k", "semantics", "coefficients"],
                &[vec![
                    alpha,
                    a.model.name().into(),
                    a.k.to_string(),
                    a.semantics.name().into(),
                    coeffs_str(&poly),
                ]],
            )?,
            Format::Json => print_json(&document(
                "prob",
                params,
                None,
                vec![json!({
                    "alpha": alpha,
                    "polynomial": poly.to_string(),
                    "coefficients": coeffs_json(&poly),
                })],
            ))?,
        }
        return Ok(Outcome::Ok);
    };
    check_probability(p)?;
    let value = poly.eval(p);
    match a.format {
        Format::Text => println!("{} ({})", rational_str(&value), decimal_str(&value)),
        Format::Csv => print_csv(
            &["alpha", "model", "k", "semantics", "p", "value", "decimal"],
            &[vec![
                alpha,
                a.model.name().into(),
                a.k.to_string(),
                a.semantics.name().into(),
                rational_str(p),
                rational_str(&value),
                decimal_str(&value),
            ]],
        )?,
        Format::Json => print_json(&document(
            "prob",
            params,
            None,
            vec![json!({
                "alpha": alpha,
                "p": rational_json(p),
                "value": rational_json(&value),
                "decimal": decimal_str(&value),
                "coefficients": coeffs_json(&poly),
            })],
        ))?,
    }
    Ok(Outcome::Ok)
}

pub fn table(a: &TableArgs) -> CmdResult {
    if a.n_max == 0 {
        return Err(ParkError::ParameterOutOfRange {
            what: "n-max",
            value: "0".into(),
            range: ">= 1".into(),
        }
        .into());
    }
    let mut cache = RecursionCache::new(a.k, a.p.clone())?;
    cache.fill(a.n_max);
    let rows: Vec<(usize, BigInt, BigRational, BigRational, BigInt)> = (1..=a.n_max)
        .map(|n| {
            let parking = BigInt::from(cache.parking(n).clone());
            let naples = BigInt::from(cache.naples(n).clone());
            let t = cache.expected(n).clone();
            let half = BigRational::new(&naples + &parking, 2.into());
            (n, parking, t, half, naples)
        })
        .collect();
    match a.format {
        Format::Text => {
            let header = ["n", "P(n)", "T(n)", "(N+P)/2", "N(n)"];
            let cells: Vec<[String; 5]> = rows
                .iter()
                .map(|(n, p, t, h, nk)| {
                    [
                        n.to_string(),
                        p.to_string(),
                        decimal_str(t),
                        decimal_str(h),
                        nk.to_string(),
                    ]
                })
                .collect();
            let widths: Vec<usize> = (0..5)
                .map(|i| {
                    cells
                        .iter()
                        .map(|c| c[i].len())
                        .chain([header[i].len()])
                        .max()
                        .unwrap()
                })
                .collect();
            let line = |c: [&str; 5]| {
                c.iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            println!("{}", line(header));
            for c in &cells {
                println!("{}", line([&c[0], &c[1], &c[2], &c[3], &c[4]]));
            }
        }
        Format::Csv => print_csv(
            &[
                "n",
                "P",
                "T",
                "T_decimal",
                "half_sum",
                "half_sum_decimal",
                "N",
            ],
            &rows
                .iter()
                .map(|(n, p, t, h, nk)| {
                    vec![
                        n.to_string(),
                        p.to_string(),
                        rational_str(t),
                        decimal_str(t),
                        rational_str(h),
                        decimal_str(h),
                        nk.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Json => print_json(&document(
            "table",
            json!({"n_max": a.n_max, "k": a.k, "p": rational_str(&a.p)}),
            None,
            rows.iter()
                .map(|(n, p, t, h, nk)| {
                    json!({
                        "n": n,
                        "P": big_json(p),
                        "T": rational_json(t),
                        "T_decimal": decimal_str(t),
                        "half_sum": rational_json(h),
                        "half_sum_decimal": decimal_str(h),
                        "N": big_json(nk),
                    })
                })
                .collect(),
        ))?,
    }
    Ok(Outcome::Ok)
}

pub fn census(a: &CensusArgs) -> CmdResult {
    let config = CensusConfig {
        k: a.k,
        semantics: a.semantics.into(),
        allow_large: a.allow_large,
        kernel: if a.replay {
            CensusKernel::Replay
        } else {
            CensusKernel::DecisionTree
        },
        ..Default::default()
    };
    let table = full_census_with(a.n, &config)?;
    let den = table.denominator();
    match a.format {
        Format::Csv => print_csv(
            &["numerator", "denominator", "count"],
            &table
                .rows()
                .map(|(num, c)| vec![num.to_string(), den.to_string(), c.to_string()])
                .collect::<Vec<_>>(),
        )?,
        Format::Text => {
            for (num, c) in table.rows() {
                println!("{num}/{den}\t{c}");
            }
            println!("total\t{}", table.total());
            println!("expectation\t{}", decimal_str(&table.expectation()));
        }
        Format::Json => {
            let doc = document(
                "census",
                json!({"n": a.n, "k": a.k, "semantics": a.semantics.name(), "p": "1/2"}),
                None,
                table
                    .rows()
                    .map(|(num, c)| json!({"numerator": num, "denominator": den, "count": c}))
                    .collect(),
            );
            let mut extra = Map::new();
            extra.insert("total".into(), json!(table.total()));
            extra.insert("expectation".into(), rational_json(&table.expectation()));
            print_json(&with_fields(doc, extra))?;
        }
    }
    let violations = table.invariant_violations();
    for v in &violations {
        eprintln!("census invariant violated: {v}");
    }
    Ok(if violations.is_empty() {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

struct Report {
    passed: bool,
    rows: Vec<Value>,
    lines: Vec<String>,
}

impl Report {
    fn new() -> Self {
        Report {
            passed: true,
            rows: Vec::new(),
            lines: Vec::new(),
        }
    }

    fn add(&mut self, ok: bool, row: Value, line: String) {
        self.passed &= ok;
        self.rows.push(row);
        self.lines.push(line);
    }
}

fn strings(tuples: &[PreferenceTuple]) -> Vec<String> {
    tuples.iter().map(ToString::to_string).collect()
}

fn run_check(a: &VerifyArgs) -> parkmodel::Result<Report> {
    let mut r = Report::new();
    let n_or = |d: usize| a.n.unwrap_or(d);
    match a.check {
        Check::Monotonicity => {
            let n = n_or(5);
            let m = verify_monotonicity(n, a.samples, a.seed)?;
            let first: Vec<Value> = m
                .violations
                .iter()
                .take(10)
                .map(|v| json!({"alpha": v.alpha.to_string(), "beta": v.beta, "car": v.car}))
                .collect();
            r.add(
                m.passed(),
                json!({
                    "n": n,
                    "exhaustive": m.exhaustive,
                    "cases": m.cases,
                    "flips_checked": m.flips_checked,
                    "violations": m.violations.len(),
                    "first_violations": first,
                }),
                format!(
                    "n={n} {} cases={} flips={} violations={}",
                    if m.exhaustive {
                        "exhaustive"
                    } else {
                        "sampled"
                    },
                    m.cases,
                    m.flips_checked,
                    m.violations.len()
                ),
            );
        }
        Check::OddCensus => {
            let n = n_or(6);
            let o = verify_odd_census(n)?;
            let den = 1u64 << (n - 1);
            for (alpha, g) in &o.staircases {
                r.add(
                    true,
                    json!({"alpha": alpha.to_string(), "numerator": g, "denominator": den}),
                    format!("{alpha}\t{g}/{den}"),
                );
            }
            r.add(
                o.passed(),
                json!({
                    "n": n,
                    "bijective": o.bijective(),
                    "odd_outside": strings(&o.odd_outside),
                    "even_staircases": strings(&o.even_staircases),
                }),
                format!(
                    "n={n} staircases={} bijective={} odd_outside={} even_staircases={}",
                    o.staircases.len(),
                    o.bijective(),
                    o.odd_outside.len(),
                    o.even_staircases.len()
                ),
            );
        }
        Check::Sandwich => {
            for row in verify_sandwich(n_or(16))?.rows {
                let holds = row.holds();
                r.add(
                    holds,
                    json!({
                        "n": row.n,
                        "P": big_json(&row.parking),
                        "T": rational_json(&row.expected),
                        "half_sum": rational_json(&row.half_sum),
                        "N": big_json(&row.naples),
                        "holds": holds,
                    }),
                    format!(
                        "n={} P={} T={} (N+P)/2={} holds={holds}",
                        row.n,
                        row.parking,
                        decimal_str(&row.expected),
                        decimal_str(&row.half_sum)
                    ),
                );
            }
        }
        Check::DirectionTotal => {
            for n in 1..=n_or(5) {
                let t = verify_direction_total(n)?;
                r.add(
                    t.passed(),
                    json!({
                        "n": n,
                        "total": coeffs_json(&t.total),
                        "expected": big_json(&t.expected),
                        "passed": t.passed(),
                    }),
                    format!(
                        "n={n} total={} expected={} passed={}",
                        t.total,
                        t.expected,
                        t.passed()
                    ),
                );
            }
        }
        Check::CircularShift => {
            for n in 1..=n_or(4) {
                let c = verify_circular(n)?;
                r.add(
                    c.passed(),
                    json!({
                        "n": n,
                        "tuples": c.tuples,
                        "normalization_failures": strings(&c.normalization_failures),
                        "shift_failures": strings(&c.shift_failures),
                        "top_spot_failures": strings(&c.top_spot_failures),
                        "column_sums": c.column_sums.iter().map(coeffs_json).collect::<Vec<_>>(),
                        "column_sums_uniform": c.column_sums_uniform(),
                        "linear_agreements": c.linear_agreements,
                        "linear_disagreements": strings(&c.linear_disagreements),
                    }),
                    format!(
                        "n={n} tuples={} shift_failures={} column_sums_uniform={} linear_agreements={} linear_disagreements={}",
                        c.tuples,
                        c.shift_failures.len(),
                        c.column_sums_uniform(),
                        c.linear_agreements,
                        c.linear_disagreements.len()
                    ),
                );
            }
        }
        Check::Characterization => {
            for n in 1..=n_or(5) {
                let c = verify_characterizations(n)?;
                r.add(
                    c.passed(),
                    json!({
                        "n": n,
                        "tuples": c.tuples,
                        "certain": c.certain,
                        "impossible": c.impossible,
                        "certain_mismatches": strings(&c.certain_mismatches),
                        "impossible_mismatches": strings(&c.impossible_mismatches),
                    }),
                    format!(
                        "n={n} tuples={} certain={} impossible={} mismatches={}",
                        c.tuples,
                        c.certain,
                        c.impossible,
                        c.certain_mismatches.len() + c.impossible_mismatches.len()
                    ),
                );
            }
        }
        Check::StaircaseFormula => {
            for n in 2..=n_or(7) {
                let s = verify_staircase_formula(n)?;
                r.add(
                    s.passed(),
                    json!({
                        "n": n,
                        "shapes": s.shapes,
                        "mismatches": s.mismatches.iter().map(|(t, _, _)| t.to_string()).collect::<Vec<_>>(),
                    }),
                    format!("n={n} shapes={} mismatches={}", s.shapes, s.mismatches.len()),
                );
            }
        }
        Check::Dyadic => {
            for n in 3..=n_or(7) {
                let d = verify_dyadic(n)?;
                r.add(
                    d.passed(),
                    json!({"n": n, "witnesses": d.witnesses.len(), "failures": d.failures}),
                    format!(
                        "n={n} witnesses={} failures={:?}",
                        d.witnesses.len(),
                        d.failures
                    ),
                );
            }
        }
        Check::Recursion => {
            let ps: Vec<BigRational> = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)]
                .iter()
                .map(|&(x, y)| BigRational::new(x.into(), y.into()))
                .collect();
            for row in verify_recursion_brute_force(n_or(6), a.k, a.semantics.into(), &ps)? {
                r.add(
                    row.agrees(),
                    json!({
                        "n": row.n,
                        "p": rational_json(&row.p),
                        "brute_force": rational_json(&row.brute_force),
                        "recursion": rational_json(&row.recursion),
                        "agrees": row.agrees(),
                    }),
                    format!(
                        "n={} p={} brute_force={} recursion={} agrees={}",
                        row.n,
                        rational_str(&row.p),
                        rational_str(&row.brute_force),
                        rational_str(&row.recursion),
                        row.agrees()
                    ),
                );
            }
        }
        Check::NaplesSemantics => {
            for row in compare_naples_semantics(n_or(6), a.k)? {
                let ok = num_bigint::BigUint::from(row.first_fit) == row.recursion;
                r.add(
                    ok,
                    json!({
                        "n": row.n,
                        "recursion": big_json(&row.recursion),
                        "jump": row.jump_back,
                        "firstfit": row.first_fit,
                    }),
                    format!(
                        "n={} recursion={} jump={} firstfit={}",
                        row.n, row.recursion, row.jump_back, row.first_fit
                    ),
                );
            }
        }
    }
    Ok(r)
}

pub fn verify(a: &VerifyArgs) -> CmdResult {
    let report = run_check(a)?;
    let check = a.check.to_possible_value_name();
    match a.format {
        Format::Json | Format::Csv => {
            let doc = document(
                "verify",
                json!({
                    "check": check,
                    "n": a.n,
                    "samples": a.samples,
                    "k": a.k,
                    "semantics": a.semantics.name(),
                }),
                Some(a.seed),
                report.rows,
            );
            let mut extra = Map::new();
            extra.insert("passed".into(), json!(report.passed));
            print_json(&with_fields(doc, extra))?;
        }
        Format::Text => {
            for line in &report.lines {
                println!("{line}");
            }
            println!("{check}: {}", if report.passed { "PASS" } else { "FAIL" });
        }
    }
    Ok(if report.passed {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

trait PossibleValueName {
    fn to_possible_value_name(&self) -> String;
}

impl<T: clap::ValueEnum> PossibleValueName for T {
    fn to_possible_value_name(&self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

pub fn mc(a: &McArgs) -> CmdResult {
    check_probability(&a.p)?;
    let model: Model = a.model.into();
    let semantics: NaplesSemantics = a.semantics.into();
    let mut fields = Map::new();
    let mut lines = Vec::new();
    let tuple = a
        .alpha
        .as_ref()
        .map(|p| PreferenceTuple::linear(&p.0))
        .transpose()?;
    let (est, scale, exact) = if let Some(alpha) = &tuple {
        let est = estimate_prob(alpha, model, a.k, semantics, &a.p, a.trials, a.seed)?;
        let exact = (alpha.len() <= 20)
            .then(|| exact_prob(alpha, a.model, a.k, a.semantics))
            .transpose()?
            .map(|poly| poly.eval(&a.p));
        fields.insert("alpha".into(), json!(alpha.to_string()));
        (est, 1.0, exact)
    } else {
        let n = a.n.expect("clap requires --alpha or --n");
        let est = estimate_expected_total(
            n,
            model,
            a.k,
            semantics,
            &a.p,
            a.tuple_samples,
            a.trials_per_tuple,
            a.seed,
        )?;
        let exact = match a.model {
            ModelArg::Direction => Some(BigRational::from_integer(
                expected_random_direction(n).into(),
            )),
            ModelArg::Naples if a.k <= 1 || semantics == NaplesSemantics::FirstFitBackward => {
                Some(expected_random_naples(n, a.k, &a.p)?)
            }
            ModelArg::Naples => None,
        };
        fields.insert("n".into(), json!(n));
        (est, tuple_space_size(n), exact)
    };
    fields.insert("mean".into(), json!(est.mean));
    fields.insert("stderr".into(), json!(est.stderr));
    fields.insert("trials".into(), json!(est.trials));
    lines.push(format!("mean = {} +- {}", est.mean, est.stderr));
    if a.alpha.is_none() {
        fields.insert("estimate".into(), json!(est.mean * scale));
        fields.insert("estimate_stderr".into(), json!(est.stderr * scale));
        lines.push(format!(
            "estimate = {} +- {}",
            est.mean * scale,
            est.stderr * scale
        ));
    }
    if let Some(exact) = &exact {
        let x = exact.to_f64().unwrap_or(f64::NAN);
        let z = est.z_score(x / scale);
        fields.insert("exact".into(), rational_json(exact));
        fields.insert("exact_decimal".into(), json!(decimal_str(exact)));
        fields.insert("z".into(), json!(z));
        lines.push(format!(
            "exact = {} ({}), z = {z:.3}",
            rational_str(exact),
            decimal_str(exact)
        ));
    }
    let params = json!({
        "alpha": tuple.as_ref().map(ToString::to_string),
        "n": a.n,
        "model": a.model.name(),
        "k": a.k,
        "semantics": a.semantics.name(),
        "p": rational_str(&a.p),
        "trials": a.trials,
        "tuple_samples": a.tuple_samples,
        "trials_per_tuple": a.trials_per_tuple,
    });
    match a.format {
        Format::Text => {
            for l in lines {
                println!("{l}");
            }
        }
        Format::Json => print_json(&document(
            "mc",
            params,
            Some(a.seed),
            vec![Value::Object(fields)],
        ))?,
        Format::Csv => {
            let header: Vec<&str> = fields.keys().map(String::as_str).collect();
            let row: Vec<String> = fields
                .values()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            print_csv(&header, &[row])?;
        }
    }
    Ok(Outcome::Ok)
}

pub fn construct(a: &ConstructArgs) -> CmdResult {
    let (alpha, numerator) = match (a.t, a.a) {
        (Some(t), _) => (odd_tuple_for(a.n, t)?, 2 * t - 1),
        (None, Some(num)) => (tuple_for_dyadic(a.n, num)?, num),
        (None, None) => unreachable!("clap requires --t or --a"),
    };
    let den = 1u64 << (a.n - 1);
    match a.format {
        Format::Text => println!("{alpha}"),
        Format::Csv => print_csv(
            &["n", "alpha", "numerator", "denominator"],
            &[vec![
                a.n.to_string(),
                alpha.to_string(),
                numerator.to_string(),
                den.to_string(),
            ]],
        )?,
        Format::Json => print_json(&document(
            "construct",
            json!({"n": a.n, "t": a.t, "a": a.a}),
            None,
            vec![json!({
                "alpha": alpha.to_string(),
                "numerator": numerator,
                "denominator": den,
            })],
        ))?,
    }
    Ok(Outcome::Ok)
}
