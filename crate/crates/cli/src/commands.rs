use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{Map, Value};

use qcensus::asymptotics::{
    central_ratio_to_power, estimate_class_count, estimate_qbinom, estimate_s, estimate_total_classes,
    ratio_to_central, star_classify, DimensionFamily, LogQValue, SSource,
};
use qcensus::census::{census, CensusConfig, Method};
use qcensus::combinatorics::{qbinom, sum_qbinom};
use qcensus::constants::{euler_kq, inverse_nome, kq_truncated, theta2, theta3, Precision};
use qcensus::field::prime_power;
use qcensus::interval::{render_bounds, to_decimal, Interval, Rounding};
use qcensus::theta::{
    asymptotic_p, convergence_report, format_half, shifted_distribution, tv_distance, DiscreteThetaDistribution,
    Parity, Sampler, ThetaVariant,
};
use qcensus::{Error, FieldSpec, GroupKind, Result};

use crate::report::{col, extra, Cell, Column, Report};
use crate::{
    Cli, Command, Common, ConstantsArgs, CensusArgs, ConvergeArgs, DistArgs, DistOp, EstimateArgs, FamilyArg,
    MethodArg, Quantity, StarArgs, VariantArg,
};
use crate::parse;

pub fn run(cli: &Cli) -> Result<Report> {
    let c = &cli.common;
    if c.precision < 10 {
        return Err(Error::InvalidParameter(format!("precision must be at least 10, got {}", c.precision)));
    }
    if c.threads == 0 {
        return Err(Error::InvalidParameter("threads must be at least 1".into()));
    }
    if let Some(q) = c.q {
        prime_power(q).ok_or(Error::NotPrimePower(q))?;
    }
    match &cli.command {
        Command::Qbinom { n, k } => qbinom_report(c, *n, *k),
        Command::Sum { n } => sum_report(c, *n),
        Command::Constants(a) => constants(c, a),
        Command::Census(a) => census_report(c, a),
        Command::Estimate(a) => estimate(c, a),
        Command::Converge(a) => converge(c, a),
        Command::Dist(a) => dist(c, a),
        Command::Star(a) => star(a),
    }
}

fn need_q(c: &Common) -> Result<u64> {
    c.q.ok_or_else(|| Error::InvalidParameter("--q is required".into()))
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required")))
}

fn prec(c: &Common) -> Precision {
    Precision::new(c.precision)
}

fn digits(c: &Common) -> usize {
    c.precision as usize
}

fn tagged(c: &Common, command: &'static str, columns: Vec<Column>) -> Report {
    let mut r = Report::new(command, columns);
    r.digits = Some(digits(c));
    r
}

fn count(v: &BigUint) -> Cell {
    Cell::Count(v.to_string())
}

fn fraction(r: &BigRational) -> Cell {
    Cell::Text(if r.is_integer() { r.numer().to_string() } else { format!("{}/{}", r.numer(), r.denom()) })
}

fn decimal(c: &Common, iv: &Interval) -> Cell {
    Cell::Text(to_decimal(&iv.mid(), digits(c), Rounding::Nearest))
}

fn bounds(c: &Common, iv: &Interval) -> (Cell, Cell) {
    let (lo, hi) = render_bounds(iv, digits(c));
    (Cell::Text(lo), Cell::Text(hi))
}

fn qbinom_report(c: &Common, n: i64, k: i64) -> Result<Report> {
    let q = need_q(c)?;
    let v = qbinom(n, k, q)?;
    let mut r = Report::new("qbinom", vec![col("n"), col("k"), col("q"), col("value")]);
    r.scalar = Some("value");
    r.push(vec![Cell::Int(n), Cell::Int(k), Cell::Int(q as i64), count(&v)]);
    Ok(r)
}

fn sum_report(c: &Common, n: i64) -> Result<Report> {
    let q = need_q(c)?;
    let v = sum_qbinom(n, q)?;
    let mut r = Report::new("sum", vec![col("n"), col("q"), col("value")]);
    r.scalar = Some("value");
    r.push(vec![Cell::Int(n), Cell::Int(q as i64), count(&v)]);
    Ok(r)
}

fn constants(c: &Common, a: &ConstantsArgs) -> Result<Report> {
    let p = prec(c);
    let tol = a.tolerance.unwrap_or_else(|| p.finest_tolerance());
    let mut r = tagged(c, "constants", vec![col("name"), col("lo"), col("hi"), extra("context")]);
    let mut push = |name: String, iv: &Interval, context: String| {
        let (lo, hi) = bounds(c, iv);
        r.push(vec![Cell::Text(name), lo, hi, Cell::Text(context)]);
    };
    let w = match (&a.nome, c.q) {
        (Some(s), _) => parse::nome(s)?,
        (None, Some(q)) => inverse_nome(q),
        (None, None) => return Err(Error::InvalidParameter("--q or --nome is required".into())),
    };
    if let Some(q) = c.q {
        let kq = euler_kq(q, tol, p)?;
        push(format!("K_{q}"), &kq.interval, kq.context.clone());
        if let Some(k) = a.k {
            let kk = kq_truncated(q, k, tol, p)?;
            push(format!("K_{q}({k})"), &kk.interval, kk.context);
        }
        if a.nome.is_none() {
            let t2 = theta2(&w, tol, p)?;
            let t3 = theta3(&w, tol, p)?;
            push(format!("theta2(1/{q})"), &t2.interval, t2.context);
            push(format!("theta3(1/{q})"), &t3.interval, t3.context);
            push("d1".into(), &(&t2.interval / &kq.interval), format!("theta2(1/{q}) / K_{q}"));
            push("d2".into(), &(&t3.interval / &kq.interval), format!("theta3(1/{q}) / K_{q}"));
            return Ok(r);
        }
    }
    let t2 = theta2(&w, tol, p)?;
    let t3 = theta3(&w, tol, p)?;
    push(format!("theta2({w})"), &t2.interval, t2.context);
    push(format!("theta3({w})"), &t3.interval, t3.context);
    Ok(r)
}

fn census_report(c: &Common, a: &CensusArgs) -> Result<Report> {
    let q = need_q(c)?;
    let field = FieldSpec::of_order(q)?;
    let kind: GroupKind = a.group.into();
    let method = match a.method {
        MethodArg::Burnside => Method::Burnside,
        MethodArg::Orbits => Method::Orbits,
        MethodArg::Both => Method::Both,
    };
    let config = CensusConfig {
        work_ceiling: c.work_ceiling,
        threads: c.threads,
        keep_profile: a.profile,
        ..CensusConfig::default()
    };
    let res = census(kind, &field, a.n, a.k, method, &config)?;
    if res.agreement() == Some(false) {
        return Err(Error::InvalidParameter(format!(
            "methods disagree: burnside {} orbits {}",
            res.burnside_count.as_ref().expect("ran"),
            res.orbit_count.as_ref().expect("ran")
        )));
    }
    let opt = |v: &Option<BigUint>| v.as_ref().map(count).unwrap_or(Cell::Empty);
    let profile = match &res.fix_profile {
        Some(p) => Cell::Json(Value::Object(p.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect::<Map<_, _>>())),
        None => Cell::Empty,
    };
    let mut r = Report::new(
        "census",
        vec![
            col("group"),
            col("n"),
            col("k"),
            col("q"),
            col("method"),
            col("count"),
            col("elapsed_ms"),
            extra("burnside_count"),
            extra("orbit_count"),
            extra("agreement"),
            extra("group_order"),
            extra("fix_sum"),
            extra("fix_profile"),
        ],
    );
    r.push(vec![
        Cell::Text(kind.short_name().into()),
        Cell::Int(a.n as i64),
        a.k.map(|k| Cell::Int(k as i64)).unwrap_or(Cell::Text("all".into())),
        Cell::Int(q as i64),
        Cell::Text(method.name().into()),
        count(&res.count),
        if a.timing { Cell::Int(res.elapsed.as_millis() as i64) } else { Cell::Empty },
        opt(&res.burnside_count),
        opt(&res.orbit_count),
        res.agreement().map(Cell::Bool).unwrap_or(Cell::Empty),
        count(&res.group_order),
        opt(&res.fix_sum),
        profile,
    ]);
    Ok(r)
}

fn estimate(c: &Common, a: &EstimateArgs) -> Result<Report> {
    let q = need_q(c)?;
    let (_, h) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let p = prec(c);
    let n = a.n;
    let kind: Option<GroupKind> = a.group.map(Into::into);
    let mut r = tagged(
        c,
        "estimate",
        vec![
            col("quantity"),
            col("group"),
            col("n"),
            col("k"),
            col("q"),
            col("digits"),
            col("logq"),
            col("estimate"),
            col("exact"),
            col("ratio"),
        ],
    );
    let log_cell = |v: &LogQValue| Cell::Text(to_decimal(&v.logq.mid(), digits(c), Rounding::Nearest));
    let est_cell = |v: &LogQValue| Cell::Text(v.render(digits(c)));
    let (name, k, logq, est, exact, ratio) = match a.what {
        Quantity::Qbinom => {
            let k = need(a.k, "k")?;
            let e = estimate_qbinom(n, k, q, p)?;
            let exact = qbinom(n as i64, k as i64, q)?;
            ("qbinom", Some(k), log_cell(&e), est_cell(&e), count(&exact), decimal(c, &e.ratio_from(&exact)))
        }
        Quantity::Central => {
            let k = need(a.k, "k")?;
            let cmp = ratio_to_central(n, k, q, p)?;
            let e = &cmp.asymptotic;
            ("central", Some(k), log_cell(e), est_cell(e), fraction(&cmp.exact), decimal(c, &cmp.ratio()))
        }
        Quantity::CentralPower => {
            let cr = central_ratio_to_power(n, q, p)?;
            let limit = LogQValue::from_positive(q, &cr.limit);
            let ratio = &cr.deviation() + &Interval::one(cr.kq.bits());
            ("central-power", None, log_cell(&limit), est_cell(&limit), fraction(&cr.exact), decimal(c, &ratio))
        }
        Quantity::Class => {
            let k = need(a.k, "k")?;
            let kind = need(kind, "group")?;
            let e = estimate_class_count(kind, n, k, q, h, p)?;
            ("class", Some(k), log_cell(&e), est_cell(&e), Cell::Empty, Cell::Empty)
        }
        Quantity::Total => {
            let kind = need(kind, "group")?;
            let source = if a.asymptotic_s { SSource::Asymptotic } else { SSource::Exact };
            let e = estimate_total_classes(kind, n, q, h, source, p)?;
            ("total", None, log_cell(&e), est_cell(&e), Cell::Empty, Cell::Empty)
        }
        Quantity::S => {
            let e = estimate_s(n, q, p)?.estimate;
            let exact = sum_qbinom(n as i64, q)?;
            ("s", None, log_cell(&e), est_cell(&e), count(&exact), decimal(c, &e.ratio_from(&exact)))
        }
    };
    r.push(vec![
        Cell::Text(name.into()),
        kind.map(|g| Cell::Text(g.short_name().into())).unwrap_or(Cell::Empty),
        Cell::Int(n as i64),
        k.map(|k| Cell::Int(k as i64)).unwrap_or(Cell::Empty),
        Cell::Int(q as i64),
        Cell::Int(c.precision as i64),
        logq,
        est,
        exact,
        ratio,
    ]);
    Ok(r)
}

fn converge(c: &Common, a: &ConvergeArgs) -> Result<Report> {
    let q = need_q(c)?;
    if a.m_min > a.m_max {
        return Err(Error::InvalidParameter(format!("empty range {}..={}", a.m_min, a.m_max)));
    }
    let rows = convergence_report(a.parity.into(), q, a.m_min..=a.m_max, c.work_ceiling, prec(c))?;
    let mut r = tagged(c, "converge", vec![col("m"), col("exact_gap"), col("tv_lo"), col("tv_hi")]);
    for row in rows {
        let gap = Cell::Text(to_decimal(&row.exact_gap.hi(), digits(c), Rounding::Up));
        let (lo, hi) = bounds(c, &row.tv);
        r.push(vec![Cell::Int(row.m as i64), gap, lo, hi]);
    }
    Ok(r)
}

fn theta_law(c: &Common, a: &DistArgs) -> Result<DiscreteThetaDistribution> {
    let variant = match (a.variant, a.parity) {
        (Some(VariantArg::Theta2), _) => ThetaVariant::Theta2,
        (Some(VariantArg::Theta3), _) => ThetaVariant::Theta3,
        (None, Some(p)) => Parity::from(p).variant(),
        (None, None) => return Err(Error::InvalidParameter("--variant or --parity is required".into())),
    };
    let w = match (&a.nome, c.q) {
        (Some(s), _) => parse::nome(s)?,
        (None, Some(q)) => inverse_nome(q),
        (None, None) => return Err(Error::InvalidParameter("--nome or --q is required".into())),
    };
    DiscreteThetaDistribution::new(variant, w, prec(c))
}

fn parity_of(a: &DistArgs) -> Result<Parity> {
    match (a.parity, a.variant) {
        (Some(p), Some(v)) => {
            let p = Parity::from(p);
            let expected = if v == VariantArg::Theta3 { ThetaVariant::Theta3 } else { ThetaVariant::Theta2 };
            if p.variant() != expected {
                return Err(Error::LatticeMismatch(format!("{} parity with {}", p.name(), expected.name())));
            }
            Ok(p)
        }
        (Some(p), None) => Ok(p.into()),
        (None, Some(VariantArg::Theta3)) => Ok(Parity::Even),
        (None, Some(VariantArg::Theta2)) => Ok(Parity::Odd),
        (None, None) => Err(Error::InvalidParameter("--parity or --variant is required".into())),
    }
}

fn dist(c: &Common, a: &DistArgs) -> Result<Report> {
    match a.op {
        DistOp::Pmf => {
            let law = theta_law(c, a)?;
            let s = a.k.as_deref().ok_or_else(|| Error::InvalidParameter("--k is required".into()))?;
            let t = parse::half_point(s)?;
            let v = law.pmf(t)?;
            let (lo, hi) = bounds(c, &v);
            let mut r = tagged(
                c,
                "dist",
                vec![col("variant"), col("nome"), col("k"), col("value"), col("lo"), col("hi")],
            );
            r.scalar = Some("value");
            r.push(vec![
                Cell::Text(law.variant.name().into()),
                fraction(&law.nome),
                Cell::Text(format_half(t)),
                decimal(c, &v),
                lo,
                hi,
            ]);
            Ok(r)
        }
        DistOp::Sample => {
            let law = theta_law(c, a)?;
            let mut sampler = Sampler::new(&law, c.seed);
            let mut r = Report::new("dist", vec![col("index"), col("value")]);
            for i in 0..a.count {
                r.push(vec![Cell::Int(i as i64), Cell::Text(format_half(sampler.sample()))]);
            }
            Ok(r)
        }
        DistOp::Shifted => {
            let q = need_q(c)?;
            let m = need(a.m, "m")?;
            let d = shifted_distribution(parity_of(a)?, m, q)?;
            let mut r = tagged(c, "dist", vec![col("r"), col("p"), extra("decimal")]);
            for (t, p) in d.support.iter().zip(&d.pmf) {
                let dec = Cell::Text(to_decimal(p, digits(c), Rounding::Nearest));
                r.push(vec![Cell::Text(format_half(*t)), fraction(p), dec]);
            }
            Ok(r)
        }
        DistOp::Tv => {
            let q = need_q(c)?;
            let m = need(a.m, "m")?;
            let parity = parity_of(a)?;
            let d = shifted_distribution(parity, m, q)?;
            let law = DiscreteThetaDistribution::for_parity(parity, q, prec(c))?;
            let (lo, hi) = bounds(c, &tv_distance(&d, &law)?);
            let mut r = tagged(c, "dist", vec![col("parity"), col("m"), col("q"), col("tv_lo"), col("tv_hi")]);
            r.push(vec![Cell::Text(parity.name().into()), Cell::Int(m as i64), Cell::Int(q as i64), lo, hi]);
            Ok(r)
        }
        DistOp::Asymptotic => {
            let q = need_q(c)?;
            let m = need(a.m, "m")?;
            let s = a.k.as_deref().ok_or_else(|| Error::InvalidParameter("--k is required".into()))?;
            let k: u64 = s.parse().map_err(|_| Error::InvalidParameter(format!("--k {s} must be a dimension")))?;
            let parity = parity_of(a)?;
            let v = asymptotic_p(parity, k, m, q, prec(c))?;
            let (lo, hi) = bounds(c, &v);
            let mut r = tagged(
                c,
                "dist",
                vec![col("parity"), col("k"), col("m"), col("q"), col("value"), col("lo"), col("hi")],
            );
            r.scalar = Some("value");
            r.push(vec![
                Cell::Text(parity.name().into()),
                Cell::Int(k as i64),
                Cell::Int(m as i64),
                Cell::Int(q as i64),
                decimal(c, &v),
                lo,
                hi,
            ]);
            Ok(r)
        }
    }
}

fn star(a: &StarArgs) -> Result<Report> {
    let family = match a.family {
        FamilyArg::HalfFloorMinusConst => DimensionFamily::HalfFloorMinusConst { r: need(a.r, "r")? },
        FamilyArg::HalfCeilPlusConst => DimensionFamily::HalfCeilPlusConst { r: need(a.r, "r")? },
        FamilyArg::HalfMinusPowerLog => {
            DimensionFamily::HalfMinusPowerLog { alpha: need(a.alpha, "alpha")?, beta: a.beta.unwrap_or(0.0) }
        }
        FamilyArg::ConstantDim => {
            let alpha = need(a.alpha, "alpha")?;
            if alpha < 0.0 || alpha.fract() != 0.0 {
                return Err(Error::InvalidParameter(format!("constant dimension {alpha} must be a nonnegative integer")));
            }
            DimensionFamily::ConstantDim { alpha: alpha as u64 }
        }
        FamilyArg::LinearFraction => DimensionFamily::LinearFraction { lambda: need(a.lambda, "lambda")? },
        FamilyArg::Tabulated => {
            let s = a.values.as_deref().ok_or_else(|| Error::InvalidParameter("--values is required".into()))?;
            DimensionFamily::Tabulated { values: parse::list(s)? }
        }
    };
    let class = star_classify(&family)?;
    let params = serde_json::to_value(&family).expect("serializable family");
    let mut r = Report::new("star", vec![col("family"), col("classification"), extra("parameters")]);
    r.push(vec![
        Cell::Text(params["family"].as_str().unwrap_or_default().to_string()),
        Cell::Text(class.name().into()),
        Cell::Json(params),
    ]);
    Ok(r)
}
