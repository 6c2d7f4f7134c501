//! The subcommands. Each returns its result object and the checks it re-ran.

use serde_json::{json, Value};

use super::json::{bound_to_json, operator_to_json, pair_to_json, scalar_to_json, series_to_json, Codec};
use super::{Check, Failure, JobConfig, Outcome, Status};
use crate::coeffs::idx::indices_up_to;
use crate::coeffs::{PowerSeries, INF};
use crate::error::Error;
use crate::opcore::{apply, commutator, diamond_mono, invert_unit_op, mul, pow, Kind, Operator};
use crate::sato::{analytical_rank, build_sato_general, build_sato_monic, construction1, construction2, membership_f, BasisChoice};
use crate::schur_hat::{centralizer_to_constants, dressing_operator, normalize, nth_root};
use crate::schur_sym::{centralizer_decompose, conjugate_to_power, joint_conjugate, reassemble};
use crate::special_ops::{abhyankar_inverse, abhyankar_inverse_weighted, abhyankar_transport, jacobian, AbhyankarMode};

type Res<T> = Result<T, Failure>;

/// x-degree assumed when neither the flags nor the inputs fix one.
const DEFAULT_X: i64 = 8;

fn field<'a>(v: &'a Value, key: &str) -> Res<&'a Value> {
    v.get(key).ok_or_else(|| Failure::parse(format!("input needs '{key}'")))
}

fn int(v: &Value, key: &str) -> Res<i64> {
    field(v, key)?.as_i64().ok_or_else(|| Failure::parse(format!("'{key}' must be an integer")))
}

fn opt_int(v: &Value, key: &str) -> Res<Option<i64>> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(_) => int(v, key).map(Some),
    }
}

fn axis(v: &Value, key: &str, n: usize) -> Res<usize> {
    let a = int(v, key)?;
    if a < 1 || a as usize > n {
        return Err(Failure::parse(format!("'{key}' = {a} outside 1..={n}")));
    }
    Ok(a as usize - 1)
}

fn codec(cfg: &JobConfig) -> Codec {
    Codec { field: cfg.field, expand_to: Some(cfg.prec_x.unwrap_or(DEFAULT_X) + cfg.guard) }
}

/// Requested x-degree: the flag, else the inputs' x-degree less the guard.
fn target_x(cfg: &JobConfig, ops: &[&Operator]) -> i64 {
    if let Some(v) = cfg.prec_x {
        return v;
    }
    match ops.iter().map(|o| o.prec().x_deg).filter(|&v| v < INF).min() {
        Some(v) => (v - cfg.guard).max(0),
        None => DEFAULT_X,
    }
}

fn op_region(v: i64, tail: i64) -> Value {
    json!({"x_deg": v, "dn_tail": tail})
}

/// A residual that must vanish on the box x-degree <= v, d_n-power >= -tail.
fn zero_check(name: impl Into<String>, r: &Operator, v: i64, tail: i64) -> Check {
    let n = r.nvars();
    let p = r.prec();
    let bad = r.terms().keys().any(|m| {
        let (e, t) = (m.x.total(), m.d.get(n - 1));
        e <= v && t >= -tail && p.contains(e, t)
    });
    let status = if bad {
        Status::Fail
    } else if r.vanishes_on_box(v, tail) {
        Status::Pass
    } else {
        Status::Insufficient
    };
    Check { name: name.into(), status, region: op_region(v, tail) }
}

/// Two series that must agree through degree `deg`.
fn series_check(name: impl Into<String>, a: &PowerSeries, b: &PowerSeries, deg: i64) -> Res<Check> {
    let d = a.sub(b)?;
    let known = d.prec().min(deg);
    let status = if !d.truncate(known).is_zero() {
        Status::Fail
    } else if d.prec() < deg {
        Status::Insufficient
    } else {
        Status::Pass
    };
    Ok(Check { name: name.into(), status, region: json!({"degree": deg}) })
}

fn bool_check(name: impl Into<String>, ok: bool) -> Check {
    Check { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, region: Value::Null }
}

fn ops_json(ops: &[Operator]) -> Value {
    Value::Array(ops.iter().map(operator_to_json).collect())
}

fn series_list(c: &Codec, v: &Value) -> Res<Vec<PowerSeries>> {
    v.as_array().ok_or_else(|| Failure::parse("expected an array of series"))?.iter().map(|s| c.series(s).map_err(Failure::from)).collect()
}

/// Strict when j(F) = 1 below `deg`, else the Jacobian-weighted formula, unless the input fixes it.
fn mode(v: &Value, f: &[PowerSeries], deg: i64) -> Res<AbhyankarMode> {
    match v.get("mode").and_then(Value::as_str).unwrap_or("auto") {
        "strict" => Ok(AbhyankarMode::Strict),
        "weighted" => Ok(AbhyankarMode::Weighted),
        "auto" => {
            let n = f.len();
            let unimodular = jacobian(f, deg)?.eq_up_to(&PowerSeries::one(n), deg - 1);
            Ok(if unimodular { AbhyankarMode::Strict } else { AbhyankarMode::Weighted })
        }
        m => Err(Failure::parse(format!("unknown mode '{m}'"))),
    }
}

fn mode_name(m: AbhyankarMode) -> &'static str {
    match m {
        AbhyankarMode::Strict => "strict",
        AbhyankarMode::Weighted => "weighted",
    }
}

pub fn run_command(command: &str, input: &Value, cfg: &JobConfig) -> Res<Outcome> {
    let c = codec(cfg);
    match command {
        "invert" => invert(&c, input, cfg),
        "transport" => transport(&c, input, cfg),
        "root" => root(&c, input, cfg),
        "normalize" => normalize_cmd(&c, input, cfg),
        "dress" => dress(&c, input, cfg),
        "centralize" => centralize(&c, input, cfg),
        "sato" => sato(&c, input),
        "pair-from-ring" => pair_from_ring(&c, input, cfg),
        "ring-from-pair" => ring_from_pair(&c, input),
        "rank" => rank(&c, input),
        "spectral" => spectral(&c, input),
        "conjugate" => conjugate(&c, input, cfg),
        "joint-conjugate" => joint(&c, input, cfg),
        "centralizer-decompose" => decompose(&c, input, cfg),
        other => Err(Failure::parse(format!("unknown command '{other}'"))),
    }
}

fn identity_map(n: usize) -> Vec<PowerSeries> {
    (0..n).map(|i| PowerSeries::var(n, i)).collect()
}

fn invert(c: &Codec, input: &Value, cfg: &JobConfig) -> Res<Outcome> {
    let f = series_list(c, field(input, "map")?)?;
    let deg = opt_int(input, "out_deg")?.or(cfg.prec_x).unwrap_or(DEFAULT_X);
    let m = mode(input, &f, deg)?;
    let g = match m {
        AbhyankarMode::Strict => abhyankar_inverse(&f, deg)?,
        AbhyankarMode::Weighted => abhyankar_inverse_weighted(&f, deg)?,
    };
    let x = identity_map(f.len());
    let mut checks = Vec::new();
    for i in 0..f.len() {
        checks.push(series_check(format!("G{}(F) = x{}", i + 1, i + 1), &g[i].compose(&f)?, &x[i], deg)?);
        checks.push(series_check(format!("F{}(G) = x{}", i + 1, i + 1), &f[i].compose(&g)?, &x[i], deg)?);
    }
    let result = json!({"inverse": g.iter().map(series_to_json).collect::<Vec<_>>(), "out_deg": deg, "mode": mode_name(m)});
    Ok(Outcome { result, checks })
}

fn transport(c: &Codec, input: &Value, cfg: &JobConfig) -> Res<Outcome> {
    let f = series_list(c, field(input, "map")?)?;
    let uf = c.series(field(input, "uf")?)?;
    let deg = opt_int(input, "out_deg")?.or(cfg.prec_x).unwrap_or(DEFAULT_X);
    let m = mode(input, &f, deg)?;
    let u = abhyankar_transport(&uf, &f, deg, m)?;
    let checks = vec![series_check("U(F) = input", &u.compose(&f)?, &uf, deg)?];
    Ok(Outcome { result: json!({"u": series_to_json(&u), "out_deg": deg, "mode": mode_name(m)}), checks })
}

fn root(c: &Codec, input: &Value, cfg: &JobConfig) -> Res<Outcome> {
    let p = c.operator(field(input, "op")?)?;
    let l = int(input, "l")?;
    if l < 1 {
        return Err(Failure::parse("'l' must be positive"));
    }
    let r = nth_root(&p, l as u32, cfg.work_tail())?;
    let v = target_x(cfg, &[&p]);
    let back = pow(&r, l as u32)?.sub(&p)?;
    let checks = vec![zero_check(format!("L^{l} - P"), &back, v, cfg.prec_tail)];
    Ok(Outcome { result: json!({"root": operator_to_json(&r), "l": l}), checks })
}

fn normalize_cmd(c: &Codec, input: &Value, cfg: &JobConfig) -> Res<Outcome> {
    let ps = c.operators(field(input, "ops")?)?;
    let nz = normalize(&ps)?;
    let v = target_x(cfg, &ps.iter().collect::<Vec<_>>());
    let tail = cfg.prec_tail;
    let fs = mul(&Operator::from_series(&nz.f), &nz.s)?;
    let mut checks = Vec::new();
    for (i, (p, q)) in ps.iter().zip(&nz.ops).enumerate() {
        let r = mul(p, &fs)?.sub(&mul(&fs, q)?)?;
        checks.push(zero_check(format!("P{} (fS) - (fS) P'{}", i + 1, i + 1), &r, v, tail));
    }
    let one = mul(&nz.s, &nz.s_inv)?.sub(&Operator::one(ps[0].nvars(), nz.s.kind()))?;
    checks.push(zero_check("S S^-1 - 1", &one, v, tail));
    let result = json!({
        "f": series_to_json(&nz.f),
        "s": operator_to_json(&nz.s),
        "s_inv": operator_to_json(&nz.s_inv),
        "ops": ops_json(&nz.ops),
        "ls": nz.ls,
    });
    Ok(Outcome { result, checks })
}

fn dress(c: &Codec, input: &Value, cfg: &JobConfig) -> Res<Outcome> {
    let ls = c.operators(field(input, "ops")?)?;
    let s = dressing_operator(&ls, cfg.work_tail())?;
    let n = s.nvars();
    let v = target_x(cfg, &ls.iter().collect::<Vec<_>>());
    let mut checks = Vec::new();
    for (i, l) in ls.iter().enumerate() {
        let mut left = Operator::d(n, i, 1);
        if i + 1 == n {
            left = left.add(&l.dn_coefficient(0))?;
        }
        let r = mul(&s, l)?.sub(&mul(&left, &s)?)?;
        checks.push(zero_check(format!("S L{} - d{} S", i + 1, i + 1), &r, v, cfg.prec_tail));
    }
    Ok(Outcome { result: json!({"s": operator_to_json(&s)}), checks })
}

fn centralize(c: &Codec, input: &Value, cfg: &JobConfig) -> Res<Outcome> {
    let q = c.operator(field(input, "q")?)?;
    let ps = c.operators(field(input, "ops")?)?;
    let e = centralizer_to_constants(&q, &ps, cfg.work_tail())?;
    let mut refs: Vec<&Operator> = ps.iter().collect();
    refs.push(&q);
    let v = target_x(cfg, &refs);
    let n = q.nvars();
    let checks = vec![
        zero_check("T Q - Q' T", &mul(&e.t, &q)?.sub(&mul(&e.q, &e.t)?)?, v, cfg.prec_tail),
        zero_check("T T^-1 - 1", &mul(&e.t, &e.t_inv)?.sub(&Operator::one(n, Kind::EHat))?, v, cfg.prec_tail),
        bool_check("Q' has constant coefficients", e.q.is_constant_coefficient()),
    ];
    let result = json!({"q": operator_to_json(&e.q), "t": operator_to_json(&e.t), "t_inv": operator_to_json(&e.t_inv)});
    Ok(Outcome { result, checks })
}

fn sato(c: &Codec, input: &Value) -> Res<Outcome> {
    let w = c.subspace(field(input, "w")?)?;
    let s = match input.get("mode").and_then(Value::as_str).unwrap_or("monic") {
        "monic" => build_sato_monic(&w)?,
        "canonical" => build_sato_general(&w, BasisChoice::Canonical)?,
        "as-given" => build_sato_general(&w, BasisChoice::AsGiven)?,
        m => return Err(Failure::parse(format!("unknown mode '{m}'"))),
    };
    let mut status = Status::Pass;
    for k in indices_up_to(w.n, w.cutoff) {
        let status_k = match diamond_mono(&k, &s).and_then(|e| w.contains(&e)) {
            Ok(true) => Status::Pass,
            Ok(false) => Status::Fail,
            Err(Error::PrecisionExhausted(_)) => Status::Insufficient,
            Err(e) => return Err(e.into()),
        };
        status = status.max_with(status_k);
    }
    let checks = vec![Check { name: "d^k diamond S in W".into(), status, region: json!({"cutoff": w.cutoff, "dn_tail": bound_to_json(w.tail())}) }];
    Ok(Outcome { result: json!({"s": operator_to_json(&s)}), checks })
}

impl Status {
    fn max_with(self, o: Status) -> Status {
        match (self, o) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Insufficient, _) | (_, Status::Insufficient) => Status::Insufficient,
            _ => Status::Pass,
        }
    }
}

fn commuting_checks(ops: &[Operator], label: &str) -> Res<Vec<Check>> {
    let mut out = Vec::new();
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let r = commutator(&ops[i], &ops[j])?;
            out.push(bool_check(format!("[{label}{}, {label}{}] = 0", i + 1, j + 1), r.is_zero()));
        }
    }
    Ok(out)
}

fn pair_from_ring(c: &Codec, input: &Value, cfg: &JobConfig) -> Res<Outcome> {
    let gens = c.operators(field(input, "ops")?)?;
    let cutoff = int(input, "cutoff")?;
    let pair = construction1(&gens, cfg.work_tail(), cutoff)?;
    let pj = pair_to_json(&pair);
    // the certificate is re-derived from the serialized pair
    let reparsed = match c.pair(&pj) {
        Ok(_) => Status::Pass,
        Err(Error::NotStabilizing(_)) | Err(Error::HilbertViolation(_)) => Status::Fail,
        Err(Error::PrecisionExhausted(_)) => Status::Insufficient,
        Err(e) => return Err(e.into()),
    };
    let mut checks = vec![
        Check { name: "W a in W for every generator".into(), status: reparsed, region: json!({"cutoff": cutoff}) },
        bool_check("Supp(W) = F", pair.w.has_full_support()),
    ];
    checks.extend(commuting_checks(&pair.a_generators, "A")?);
    Ok(Outcome { result: json!({"pair": pj}), checks })
}

fn ring_from_pair(c: &Codec, input: &Value) -> Res<Outcome> {
    let pair = c.pair(field(input, "pair")?)?;
    let bs = construction2(&pair)?;
    let mut checks = commuting_checks(&bs, "B")?;
    for (i, b) in bs.iter().enumerate() {
        checks.push(bool_check(format!("B{} is differential", i + 1), membership_f(b)));
    }
    Ok(Outcome { result: json!({"ops": ops_json(&bs)}), checks })
}

fn rank(c: &Codec, input: &Value) -> Res<Outcome> {
    let pair = c.pair(field(input, "pair")?)?;
    let budget = opt_int(input, "budget")?.unwrap_or(pair.w.cutoff);
    let r = analytical_rank(&pair, budget)?;
    let mut checks = vec![bool_check("pair certified", pair.certify().is_ok())];
    if let Some(h) = pair.rank_hint {
        checks.push(bool_check("rank matches the hint", h == r.rank));
    }
    Ok(Outcome { result: json!({"rank": r.rank, "exact": r.exact, "budget": r.budget}), checks })
}

fn spectral(c: &Codec, input: &Value) -> Res<Outcome> {
    let gens = c.operators(field(input, "ops")?)?;
    let chi = field(input, "chi")?
        .as_array()
        .ok_or_else(|| Failure::parse("'chi' must be an array"))?
        .iter()
        .map(|s| c.scalar(s).map_err(Failure::from))
        .collect::<Res<Vec<_>>>()?;
    let out_deg = int(input, "out_deg")?;
    let sol = crate::sato::solve_spectral(&gens, &chi, out_deg)?;
    let mut checks = Vec::new();
    for (b, f) in sol.basis.iter().enumerate() {
        for (i, (q, x)) in gens.iter().zip(&chi).enumerate() {
            let dq = q.terms().keys().map(|m| m.d.total()).max().unwrap_or(0);
            let top = (out_deg - dq).min(q.prec().x_deg);
            checks.push(series_check(format!("Q{}(f{}) = chi f{}", i + 1, b + 1, b + 1), &apply(q, f)?, &f.scale(x), top)?);
        }
    }
    let result = json!({
        "basis": sol.basis.iter().map(series_to_json).collect::<Vec<_>>(),
        "dimension": sol.basis.len(),
        "out_deg": out_deg,
        "stabilized": sol.stabilized,
        "chi": chi.iter().map(scalar_to_json).collect::<Vec<_>>(),
    });
    Ok(Outcome { result, checks })
}

fn power_checks(s: &Operator, ps: &[(Operator, usize, i64)], v: i64) -> Res<(Operator, Vec<Check>)> {
    let n = s.nvars();
    let s_inv = invert_unit_op(s)?;
    let mut checks = Vec::new();
    for (p, i, k) in ps {
        let dk = Operator::d(n, *i, *k);
        let lhs = mul(s, p)?;
        checks.push(zero_check(format!("S P - d{}^{k} S", i + 1), &lhs.sub(&mul(&dk, s)?)?, v, 0));
        checks.push(zero_check(format!("S P S^-1 - d{}^{k}", i + 1), &mul(&lhs, &s_inv)?.sub(&dk)?, v, 0));
    }
    let one = mul(s, &s_inv)?.sub(&Operator::one(n, Kind::DSym))?;
    checks.push(zero_check("S S^-1 - 1", &one, v, 0));
    Ok((s_inv, checks))
}

fn cert_degree(cfg: &JobConfig, v: i64) -> i64 {
    cfg.cert.unwrap_or(v).min(v)
}

fn conjugate_job(c: &Codec, job: &Value, cfg: &JobConfig) -> Res<(Operator, Operator, i64, Vec<Check>)> {
    let p = c.operator(field(job, "op")?)?;
    let i = axis(job, "axis", p.nvars())?;
    let k = int(job, "k")?;
    let v = target_x(cfg, &[&p]);
    let s = conjugate_to_power(&p, i, k, cert_degree(cfg, v))?;
    let (s_inv, checks) = power_checks(&s, &[(p, i, k)], v)?;
    Ok((s, s_inv, v, checks))
}

fn conjugate(c: &Codec, input: &Value, cfg: &JobConfig) -> Res<Outcome> {
    let (s, s_inv, _, checks) = conjugate_job(c, input, cfg)?;
    Ok(Outcome { result: json!({"s": operator_to_json(&s), "s_inv": operator_to_json(&s_inv)}), checks })
}

fn joint(c: &Codec, input: &Value, cfg: &JobConfig) -> Res<Outcome> {
    let ps = c.operators(field(input, "ops")?)?;
    let ks: Vec<i64> = field(input, "ks")?
        .as_array()
        .ok_or_else(|| Failure::parse("'ks' must be an array"))?
        .iter()
        .map(|k| k.as_i64().ok_or_else(|| Failure::parse("'ks' entries must be integers")))
        .collect::<Res<_>>()?;
    let v = target_x(cfg, &ps.iter().collect::<Vec<_>>());
    let s = joint_conjugate(&ps, &ks, cert_degree(cfg, v))?;
    let triples: Vec<(Operator, usize, i64)> = ps.into_iter().zip(ks).enumerate().map(|(i, (p, k))| (p, i, k)).collect();
    let (s_inv, checks) = power_checks(&s, &triples, v)?;
    Ok(Outcome { result: json!({"s": operator_to_json(&s), "s_inv": operator_to_json(&s_inv)}), checks })
}

fn decompose(c: &Codec, input: &Value, cfg: &JobConfig) -> Res<Outcome> {
    let q = c.operator(field(input, "q")?)?;
    let n = q.nvars();
    let mut constraints = Vec::new();
    for con in field(input, "constraints")?.as_array().ok_or_else(|| Failure::parse("'constraints' must be an array"))? {
        let pair = con.as_array().filter(|a| a.len() == 2).ok_or_else(|| Failure::parse("each constraint is [axis, k]"))?;
        let (a, k) = (pair[0].as_i64().unwrap_or(0), pair[1].as_i64().unwrap_or(0));
        if a < 1 || a as usize > n || k < 1 {
            return Err(Failure::parse(format!("bad constraint [{a}, {k}]")));
        }
        constraints.push((a as usize - 1, k as u32));
    }
    let mut result = serde_json::Map::new();
    let mut checks = Vec::new();
    let (target, v) = match input.get("conjugate") {
        Some(job) => {
            let (s, s_inv, v, cs) = conjugate_job(c, job, cfg)?;
            checks.extend(cs);
            result.insert("s".into(), operator_to_json(&s));
            (mul(&mul(&s, &q)?, &s_inv)?, v)
        }
        None => {
            let v = target_x(cfg, &[&q]);
            (q.clone(), v)
        }
    };
    let dec = centralizer_decompose(&target, &constraints)?;
    let back = reassemble(&dec, v)?;
    checks.push(zero_check("reassembly - Q", &back.sub(&target)?, v, 0));
    let free = dec.terms.values().all(|op| {
        op.terms().keys().all(|m| constraints.iter().all(|(a, _)| m.x.get(*a) == 0 && m.d.get(*a) == 0))
    });
    checks.push(bool_check("coefficients free of the constrained variables", free));
    let terms: Vec<Value> = dec
        .terms
        .iter()
        .map(|((j, a), op)| json!({"j": j, "a": a, "c": operator_to_json(op)}))
        .collect();
    result.insert("operator".into(), operator_to_json(&target));
    result.insert("terms".into(), Value::Array(terms));
    result.insert("x_deg".into(), bound_to_json(dec.x_deg));
    Ok(Outcome { result: Value::Object(result), checks })
}
