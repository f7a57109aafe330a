//! Reproducible verification runs over the heisenq engine. Every
//! subcommand produces a versioned report; structured output is
//! byte-identical for identical flags unless --timestamps is set.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use heisenq::cyclotomic::Cyclotomic;
use heisenq::heisenberg::{
    self, all_realizations, eta_map, xi_map, HeisenbergElement,
};
use heisenq::laurent::{parse_laurent, LaurentPolynomial, VarNames};
use heisenq::linsys::{self, RadicalOutcome};
use heisenq::rationalize::{build_certificate, projective_tower, StepStatus};
use heisenq::report::{Report, Status};

#[derive(Parser)]
#[command(
    name = "heisenq",
    version,
    about = "Exact verification runs for finite Heisenberg group actions"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Include wall-clock timings in the report notes. Off by default so
    /// that identical flags give byte-identical output.
    #[arg(long, global = true)]
    timestamps: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Groebner,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate the group, verify its structure, and sweep all spectra.
    GroupCheck {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=12))]
        n: u64,
        /// Largest n enumerated at all; larger runs come back inconclusive.
        #[arg(long, default_value_t = 8)]
        budget: u64,
    },
    /// Character table of the f_k and invariance of the degree-n^2 system.
    Invariants {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=8))]
        n: u64,
        /// Exhaustive sweep over all n^3 elements up to this n; above it
        /// only the (already sufficient) generator checks run.
        #[arg(long, default_value_t = 6)]
        budget: u64,
    },
    /// Invariant dimensions from the Molien series, cross-checked against
    /// brute-force Reynolds ranks at small n.
    Molien {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=8))]
        n: u64,
        #[arg(long = "max-deg", default_value_t = 12)]
        max_deg: usize,
    },
    /// Groebner basepoint-freeness certificate for {f_1..f_n, x_0...x_(n-1)}.
    Bpf {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=8))]
        n: u64,
        /// S-pair budget per Groebner run.
        #[arg(long, default_value_t = linsys::DEFAULT_PAIR_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Method::Groebner)]
        method: Method,
    },
    /// Build and audit the rationalization tower certificate.
    Rationalize {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=8))]
        n: u64,
    },
    /// The n = 3 showcase: the four invariants, the pencil of cubics, and
    /// the orbit structure of the isolated fixed points.
    Hesse,
    /// Parse an expression and report its invariance data.
    ParseEval {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=12))]
        n: u64,
        /// Expression in x0..x(n-1), rational constants, and roots of
        /// unity (zN^k, or w for zeta_n).
        expr: String,
        /// Extra pullback by omega^c xi^a eta^b, written "c,a,b".
        #[arg(long)]
        action: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut report = match &cli.command {
        Cmd::GroupCheck { n, budget } => cmd_group_check(*n, *budget),
        Cmd::Invariants { n, budget } => cmd_invariants(*n, *budget),
        Cmd::Molien { n, max_deg } => cmd_molien(*n, *max_deg),
        Cmd::Bpf { n, budget, method: _ } => cmd_bpf(*n, *budget, cli.timestamps),
        Cmd::Rationalize { n } => cmd_rationalize(*n),
        Cmd::Hesse => cmd_hesse(),
        Cmd::ParseEval { n, expr, action } => match cmd_parse_eval(*n, expr, action.as_deref()) {
            Ok(r) => r,
            Err(message) => {
                eprintln!("{message}");
                return ExitCode::from(2);
            }
        },
    };
    if cli.timestamps {
        report.note(format!("elapsed_ms: {}", started.elapsed().as_millis()));
    }
    let body = match cli.format {
        Format::Human => report.render_human(),
        Format::Structured => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &body) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    } else {
        print!("{body}");
    }
    ExitCode::from(u8::try_from(report.exit_code()).expect("exit codes are small"))
}

fn cmd_group_check(n: u64, budget: u64) -> Report {
    let mut report = Report::new(
        "group-check",
        &[("n", n.to_string()), ("budget", budget.to_string())],
    );
    if n > budget {
        report.push(
            "enumeration",
            Status::Inconclusive,
            format!("n = {n} exceeds the enumeration cap {budget}"),
        );
        return report;
    }
    let exhaustive = n <= 4;
    let check = heisenberg::group_check(n, exhaustive);
    report.push(
        "group_order",
        Status::from_bool(
            check.group_order == (n * n * n) as usize && check.closure_is_all_normal_forms,
        ),
        format!("closure of {{xi, eta}} has {} elements, n^3 = {}", check.group_order, n * n * n),
    );
    report.push(
        "realization",
        Status::from_bool(check.realize_injective && check.generator_orders_ok),
        "faithful on monomial maps; xi^n = eta^n = 1",
    );
    report.push(
        "homomorphism",
        Status::from_bool(check.homomorphism_ok),
        format!(
            "realize(g*h) = realize(g) o realize(h) on {} pairs ({})",
            check.homomorphism_pairs_checked,
            if exhaustive { "exhaustive" } else { "deterministic sample" }
        ),
    );
    report.push(
        "center",
        Status::from_bool(
            check.center_order == n as usize
                && check.center_generated_by_commutator
                && check.commutator_scalar_order_is_n,
        ),
        format!(
            "center has order {}, generated by [xi, eta] = {} * id",
            check.center_order, check.commutator_scalar
        ),
    );
    for note in &check.notes {
        report.note(note.clone());
    }

    // spectrum sweep over every noncentral class: multiplicity is exactly
    // gcd(a, b, n), so the spectrum is simple iff gcd(a, b, n) = 1, and
    // simple classes have exactly n isolated projective fixed points
    let mut swept = 0usize;
    let mut simple = 0usize;
    let mut nonsimple: Vec<(u64, u64)> = Vec::new();
    let mut law_ok = true;
    for (el, m) in all_realizations(n) {
        if el.is_central() {
            continue;
        }
        swept += 1;
        let (_, a, b) = el.exponents();
        let g = gcd3(a, b, n);
        let mults = heisenberg::eigenvalue_multiplicities(&m).expect("group realizations");
        if !mults.iter().all(|(_, count)| *count == g as usize) {
            law_ok = false;
        }
        if g == 1 {
            simple += 1;
            let fixed = heisenberg::fixed_points_projective(&m).expect("simple spectrum");
            if fixed.len() != n as usize {
                law_ok = false;
            }
        } else if !nonsimple.contains(&(a, b)) {
            nonsimple.push((a, b));
        }
    }
    let mut notes = Vec::new();
    if !nonsimple.is_empty() {
        notes.push(format!(
            "classes with repeated eigenvalues (multiplicity gcd(a,b,n) > 1): {nonsimple:?}"
        ));
    }
    report.push_with_notes(
        "spectra",
        Status::from_bool(law_ok),
        format!(
            "{swept} noncentral classes; {simple} with simple spectrum; multiplicity = gcd(a,b,n) throughout; simple classes have n = {n} fixed points"
        ),
        notes,
    );
    report
}

fn gcd3(a: u64, b: u64, n: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    gcd(gcd(a, b), n)
}

fn cmd_invariants(n: u64, budget: u64) -> Report {
    let mut report = Report::new(
        "invariants",
        &[("n", n.to_string()), ("budget", budget.to_string())],
    );
    let mut characters = Vec::new();
    let mut chars_ok = true;
    for k in 1..=n {
        let f = heisenberg::semi_invariant_f(n, k);
        match heisenberg::character_of_semiinvariant(&f, n) {
            Some((kx, ke)) => {
                characters.push(format!("f_{k}: ({kx}, {ke})"));
                if kx != k % n || ke != 0 {
                    chars_ok = false;
                }
            }
            None => {
                characters.push(format!("f_{k}: not a semi-invariant"));
                chars_ok = false;
            }
        }
    }
    report.push_with_notes(
        "characters",
        Status::from_bool(chars_ok),
        characters.join("; "),
        vec![
            "xi-pullback scales f_k by the character k mod n in this composition convention; eta fixes every f_k".to_string(),
        ],
    );

    let exhaustive = n <= budget;
    let generators: Vec<LaurentPolynomial> = (1..=n)
        .map(|k| heisenberg::semi_invariant_f(n, k).pow(n))
        .chain(std::iter::once(
            LaurentPolynomial::monomial(n as usize, &vec![1; n as usize], Cyclotomic::one())
                .pow(n),
        ))
        .collect();
    let mut invariant_ok = true;
    if exhaustive {
        for (_, m) in all_realizations(n) {
            for f in &generators {
                if &m.pullback(f) != f {
                    invariant_ok = false;
                }
            }
        }
    } else {
        for m in [xi_map(n), eta_map(n)] {
            for f in &generators {
                if &m.pullback(f) != f {
                    invariant_ok = false;
                }
            }
        }
    }
    report.push(
        "system_invariance",
        Status::from_bool(invariant_ok),
        format!(
            "f_1^{n}..f_{n}^{n} and (x_0...x_{})^{n} fixed by {}",
            n - 1,
            if exhaustive {
                format!("all {} elements", n * n * n)
            } else {
                "both generators (sufficient: invariance is multiplicative)".to_string()
            }
        ),
    );
    report
}

fn cmd_molien(n: u64, max_deg: usize) -> Report {
    let mut report = Report::new(
        "molien",
        &[("n", n.to_string()), ("max_deg", max_deg.to_string())],
    );
    let dims = match heisenberg::molien_dimensions(n, max_deg) {
        Ok(d) => d,
        Err(e) => {
            report.push("molien_series", Status::Fail, format!("{e}"));
            return report;
        }
    };
    let rendered: Vec<String> = dims.iter().map(usize::to_string).collect();
    report.push(
        "molien_series",
        Status::Pass,
        format!("({})", rendered.join(", ")),
    );
    let vanishing_ok = (1..=max_deg).all(|d| n == 1 || d as u64 % n == 0 || dims[d] == 0);
    report.push(
        "vanishing",
        Status::from_bool(vanishing_ok),
        "invariant dimension is 0 whenever n does not divide the degree",
    );
    if n <= 3 && max_deg <= 12 {
        let mut agree = true;
        for (d, &dim) in dims.iter().enumerate() {
            if heisenberg::invariant_dimension_bruteforce(n, d as i64) != dim {
                agree = false;
            }
        }
        report.push(
            "bruteforce_agreement",
            Status::from_bool(agree),
            format!("Reynolds-image rank matches in every degree 0..={max_deg}"),
        );
    } else {
        report.note("brute-force cross-check skipped (runs at n <= 3, max-deg <= 12)");
    }
    report.attach("dimensions", serde_json::json!(dims));
    report
}

fn cmd_bpf(n: u64, budget: u64, timestamps: bool) -> Report {
    let mut report = Report::new(
        "bpf",
        &[
            ("n", n.to_string()),
            ("budget", budget.to_string()),
            ("method", "groebner".to_string()),
        ],
    );
    let cert = linsys::basepoint_free_certificate(n, budget);
    for outcome in &cert.outcomes {
        let (status, witness) = match outcome.outcome {
            RadicalOutcome::InRadical => {
                (Status::Pass, "in the radical of the system ideal".to_string())
            }
            RadicalOutcome::NotInRadical => (
                Status::Fail,
                "conclusively not in the radical: the system has basepoints".to_string(),
            ),
            RadicalOutcome::Inconclusive => (
                Status::Inconclusive,
                format!("S-pair budget {budget} exhausted before the basis closed"),
            ),
        };
        let notes = if timestamps {
            vec![format!("elapsed_ms: {}", outcome.millis)]
        } else {
            Vec::new()
        };
        report.push_with_notes(&format!("x{}", outcome.variable), status, witness, notes);
    }
    if let Some(point) = linsys::even_basepoint_witness(n) {
        let rendered: Vec<String> = point.iter().map(Cyclotomic::render).collect();
        report.note(format!(
            "verified basepoint at ({}): every member of the system vanishes there",
            rendered.join(" : ")
        ));
        report.note(
            "for even n >= 4 the zeros at odd positions kill every adjacent-pair term and \
             the remaining power sum vanishes at a primitive 2n-th root of unity",
        );
    }
    report.attach(
        "outcomes",
        serde_json::json!(cert
            .outcomes
            .iter()
            .map(|o| serde_json::json!({"variable": o.variable, "outcome": o.outcome}))
            .collect::<Vec<_>>()),
    );
    report
}

fn cmd_rationalize(n: u64) -> Report {
    let mut report = Report::new("rationalize", &[("n", n.to_string())]);
    let cert = build_certificate(n);
    for step in &cert.steps {
        match &step.status {
            StepStatus::Verified => {
                let witness = step
                    .witness
                    .get("index")
                    .map(|i| format!("machine verified; lattice index {i}"))
                    .unwrap_or_else(|| "machine verified".to_string());
                report.push(&step.name, Status::Pass, witness);
            }
            StepStatus::Cited(source) => {
                report.push(&step.name, Status::Cited, source.clone());
            }
        }
    }
    report.push(
        "verdict",
        Status::from_bool(cert.passed()),
        format!("{:?}", cert.verdict),
    );
    for d in &cert.discrepancies {
        report.note(d.clone());
    }
    let tower = projective_tower(n);
    report.push(
        "projective_tower",
        Status::from_bool(tower.passed()),
        format!(
            "degree-0 xi-invariant sublattice has index {}; induced eta has exact order {n}",
            tower.invariant_index
        ),
    );
    report.attach(
        "certificate",
        serde_json::to_value(&cert).expect("certificate serializes"),
    );
    report.attach(
        "projective_tower",
        serde_json::to_value(&tower).expect("tower report serializes"),
    );
    report
}

fn cmd_hesse() -> Report {
    let mut report = Report::new("hesse", &[("n", "3".to_string())]);
    let showcase = linsys::n3_showcase();
    report.push(
        "generators_invariant",
        Status::from_bool(showcase.generator_invariant.iter().all(|&b| b)),
        "xyz, x^3+y^3+z^3, x^3y^3+y^3z^3+z^3x^3, x^3y^6+y^3z^6+z^3x^6 fixed by all 27 elements",
    );
    report.push(
        "pencil_preserved",
        Status::from_bool(
            showcase.xi_fixes_cubic
                && showcase.eta_fixes_cubic
                && showcase.xi_fixes_product
                && showcase.eta_fixes_product,
        ),
        "xi and eta fix x^3+y^3+z^3 and xyz individually, so every member of the pencil is preserved",
    );
    let dims: Vec<String> = showcase
        .degrees
        .iter()
        .map(|d| d.span_dimension.to_string())
        .collect();
    report.push(
        "degree_dimensions",
        Status::from_bool(showcase.mismatched_degrees.is_empty()),
        format!(
            "subalgebra dimensions ({}) match the Molien series for every degree <= 9",
            dims.join(", ")
        ),
    );
    match heisenberg::stabilizer_orbit_report(3) {
        Ok(orbits) => {
            let ok = orbits.orbits.len() == 4
                && orbits.orbits.iter().all(|o| o.stabilizer_order == 3 && o.size == 3)
                && orbits.nonsimple_classes.is_empty();
            report.push(
                "orbits",
                Status::from_bool(ok),
                format!(
                    "{} orbits of isolated fixed points, each of size 3 with stabilizer order 3 ({} points)",
                    orbits.orbits.len(),
                    orbits.total_points
                ),
            );
        }
        Err(e) => report.push("orbits", Status::Fail, format!("{e}")),
    }
    report.attach(
        "showcase",
        serde_json::to_value(&showcase).expect("showcase serializes"),
    );
    report
}

fn cmd_parse_eval(n: u64, expr: &str, action: Option<&str>) -> Result<Report, String> {
    let vars = VarNames::x(n as usize);
    let f = parse_laurent(expr, &vars, Some(n)).map_err(|e| e.to_string())?;
    let extra = match action {
        None => None,
        Some(triple) => {
            let parts: Vec<&str> = triple.split(',').collect();
            if parts.len() != 3 {
                return Err(format!("--action wants \"c,a,b\", got {triple:?}"));
            }
            let mut nums = [0i64; 3];
            for (slot, part) in nums.iter_mut().zip(&parts) {
                *slot = part
                    .trim()
                    .parse::<i64>()
                    .map_err(|e| format!("--action component {part:?}: {e}"))?;
            }
            Some(HeisenbergElement::new(n, nums[0], nums[1], nums[2]))
        }
    };
    let mut report = Report::new(
        "parse-eval",
        &[("n", n.to_string()), ("expr", expr.to_string())],
    );
    report.push("normal_form", Status::Pass, f.render(&vars));
    report.push(
        "homogeneous",
        Status::Pass,
        match f.homogeneous_degree() {
            Some(d) => format!("degree {d}"),
            None => "inhomogeneous".to_string(),
        },
    );
    report.push(
        "character",
        Status::Pass,
        match heisenberg::character_of_semiinvariant(&f, n) {
            Some((kx, ke)) => format!("semi-invariant with character ({kx}, {ke})"),
            None => "not a semi-invariant".to_string(),
        },
    );
    report.push("pullback_xi", Status::Pass, xi_map(n).pullback(&f).render(&vars));
    report.push("pullback_eta", Status::Pass, eta_map(n).pullback(&f).render(&vars));
    if let Some(el) = extra {
        let (c, a, b) = el.exponents();
        report.push(
            &format!("pullback_w^{c}xi^{a}eta^{b}"),
            Status::Pass,
            el.realize().pullback(&f).render(&vars),
        );
    }
    Ok(report)
}
