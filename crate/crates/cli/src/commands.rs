use conley_core::connection::{
    ar_decomposition, gamma_cross_validate, gamma_rank_bound, gamma_sum_decomposition, morse_equation_check,
    ARDecomposition, MorseRow,
};
use conley_core::cubical::{closure, CubicalSet};
use conley_core::dynamics::{validate_filtration_pair, FiltrationPair, FiltrationTriple, PairReport};
use conley_core::emit_receive::{check_admissible, emitter_from_index, receiver_Omega, receiver_omega};
use conley_core::index::{conley_index, ConleyIndex};
use conley_core::system::{Options, System};
use conley_core::{Error, Field, Matrix, Result};
use serde_json::{json, Value};

use crate::table::{matrix_text, Table};

pub struct Context {
    pub system: System,
    pub field: Field,
    pub options: Options,
    pub name: Option<String>,
    pub z: Option<String>,
    pub z0: Option<String>,
}

pub struct Output {
    pub json: Value,
    pub text: String,
    pub status: u8,
}

impl Output {
    fn ok(json: Value, text: String) -> Output {
        Output { json, text, status: 0 }
    }
}

fn matrix_json(m: &Matrix) -> Value {
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": m.to_strings() })
}

fn blocks_json(ms: &[Matrix]) -> Value {
    Value::Array(ms.iter().map(matrix_json).collect())
}

fn no_default(kind: &str, names: Vec<String>) -> Error {
    Error::Parse(format!("no default {kind}; choose one with --pair from: {}", names.join(", ")))
}

impl Context {
    fn pair_name(&self) -> Result<Option<String>> {
        if let Some(n) = &self.name {
            return Ok(Some(n.clone()));
        }
        if self.system.regions.contains_key("N") {
            return Ok(None);
        }
        let names = self.system.pair_names();
        if names.iter().any(|n| n == "main") {
            return Ok(Some("main".into()));
        }
        Err(no_default("pair", names))
    }

    fn triple_name(&self) -> Result<Option<String>> {
        if let Some(n) = &self.name {
            return Ok(Some(n.clone()));
        }
        let names = self.system.triple_names();
        if names.iter().any(|n| n == "main") {
            return Ok(Some("main".into()));
        }
        if self.system.has_triple(None) {
            return Ok(None);
        }
        Err(no_default("triple", names))
    }

    fn pair(&self) -> Result<(String, FiltrationPair)> {
        let name = self.pair_name()?;
        let (n, l) = self.system.pair(name.as_deref())?;
        let pair = FiltrationPair::new(&self.system.map, &n, &l)?;
        Ok((name.unwrap_or_else(|| "N/L".into()), pair))
    }

    fn index(&self) -> Result<(String, ConleyIndex)> {
        let (name, pair) = self.pair()?;
        Ok((name, conley_index(&self.system.map, &pair, self.field)?))
    }

    fn triple(&self) -> Result<(String, FiltrationTriple)> {
        let name = self.triple_name()?;
        let (n0, n1, n2) = self.system.triple(name.as_deref())?;
        let t = FiltrationTriple::new(&self.system.map, &n0, &n1, &n2)?;
        Ok((name.unwrap_or_else(|| "N0/N1/N2".into()), t))
    }

    fn decomposition(&self) -> Result<(String, ARDecomposition)> {
        let (name, t) = self.triple()?;
        Ok((name, ar_decomposition(&self.system.map, &t, self.field, &self.options)?))
    }

    fn header(&self, command: &str, target: &str) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("command".into(), json!(command));
        m.insert("target".into(), json!(target));
        m.insert("field".into(), json!(self.field.to_string()));
        m
    }
}

fn pair_report_json(name: &str, r: &PairReport) -> Value {
    json!({
        "name": name,
        "valid": r.valid,
        "condition": r.condition.map(|c| c.to_string()),
        "witness": r.witness.as_ref().map(|c| c.to_string()),
        "message": r.message,
        "invariant_cubes": r.invariant.len(),
        "exit_cubes": r.exit_set.len(),
    })
}

fn check_pair(sys: &System, name: &str, n: &CubicalSet, l: &CubicalSet) -> Result<(Value, bool)> {
    let r = validate_filtration_pair(&sys.map, &closure(n), &closure(l))?;
    Ok((pair_report_json(name, &r), r.valid))
}

pub fn validate(ctx: &Context) -> Result<Output> {
    let sys = &ctx.system;
    let mut pairs: Vec<Option<String>> = Vec::new();
    let mut triples: Vec<Option<String>> = Vec::new();
    match &ctx.name {
        Some(n) if sys.triple_names().contains(n) => triples.push(Some(n.clone())),
        Some(n) => pairs.push(Some(n.clone())),
        None => {
            if sys.regions.contains_key("N") {
                pairs.push(None);
            }
            pairs.extend(sys.pair_names().into_iter().map(Some));
            triples.extend(sys.triple_names().into_iter().map(Some));
            if triples.is_empty() && sys.has_triple(None) {
                triples.push(None);
            }
        }
    }
    if pairs.is_empty() && triples.is_empty() {
        return Err(Error::Parse("the file names no pair or triple to validate".into()));
    }
    let mut all_valid = true;
    let mut table = Table::new(&["target", "valid", "condition", "witness"]);
    let mut pair_json = Vec::new();
    for name in &pairs {
        let (n, l) = sys.pair(name.as_deref())?;
        let label = name.clone().unwrap_or_else(|| "N/L".into());
        let (v, valid) = check_pair(sys, &label, &n, &l)?;
        all_valid &= valid;
        table.row(&[label, valid.to_string(), text_or_dash(&v["condition"]), text_or_dash(&v["witness"])]);
        pair_json.push(v);
    }
    let mut triple_json = Vec::new();
    for name in &triples {
        let (n0, n1, n2) = sys.triple(name.as_deref())?;
        let label = name.clone().unwrap_or_else(|| "N0/N1/N2".into());
        let (c0, c1, c2) = (closure(&n0), closure(&n1), closure(&n2));
        let nested = c2.is_subset(&c1) && c1.is_subset(&c0);
        let mut valid = nested;
        let mut parts = Vec::new();
        for (role, n, l) in [("S", &c0, &c2), ("R", &c0, &c1), ("A", &c1, &c2)] {
            let (v, ok) = check_pair(sys, &format!("{label}.{role}"), n, l)?;
            valid &= ok;
            table.row(&[
                format!("{label}.{role}"),
                ok.to_string(),
                text_or_dash(&v["condition"]),
                text_or_dash(&v["witness"]),
            ]);
            parts.push(v);
        }
        if !nested {
            table.row(&[label.clone(), "false".into(), "nesting N0 ⊇ N1 ⊇ N2".into(), "-".into()]);
        }
        all_valid &= valid;
        triple_json.push(json!({ "name": label, "valid": valid, "nested": nested, "pairs": parts }));
    }
    let mut m = ctx.header("validate", ctx.name.as_deref().unwrap_or("all"));
    m.insert("valid".into(), json!(all_valid));
    m.insert("pairs".into(), Value::Array(pair_json));
    m.insert("triples".into(), Value::Array(triple_json));
    let verdict = if all_valid { "all filtration pairs valid" } else { "violation found" };
    let text = format!("{}{verdict}\n", table.render());
    Ok(Output { json: Value::Object(m), text, status: if all_valid { 0 } else { 2 } })
}

fn text_or_dash(v: &Value) -> String {
    v.as_str().unwrap_or("-").to_string()
}

pub fn index(ctx: &Context) -> Result<Output> {
    let (name, idx) = ctx.index()?;
    let hom = idx.pair_homology.homology.dims();
    let mut table = Table::new(&["q", "dim H", "dim CH", "φ on CH"]);
    let mut phis = Vec::new();
    for q in 0..=idx.top() {
        let phi = idx.phi(q);
        table.row(&[q.to_string(), hom[q].to_string(), idx.dim(q).to_string(), matrix_text(&phi.to_strings())]);
        phis.push(phi.clone());
    }
    let endos: Vec<Matrix> = (0..=idx.top()).map(|q| idx.endomorphism(q).clone()).collect();
    let mut m = ctx.header("index", &name);
    m.insert("homology_dims".into(), json!(hom));
    m.insert("index_dims".into(), json!(idx.dims()));
    m.insert("phi".into(), blocks_json(&phis));
    m.insert("endomorphism".into(), blocks_json(&endos));
    m.insert("invariant_cubes".into(), json!(idx.pair.report.invariant.len()));
    let text = format!("Conley index of pair {name} over {}\n{}", ctx.field, table.render());
    Ok(Output::ok(Value::Object(m), text))
}

pub fn emit(ctx: &Context) -> Result<Output> {
    let (name, idx) = ctx.index()?;
    let e = emitter_from_index(&ctx.system.map, idx)?;
    let mut table = Table::new(&["q", "dim CH_q", "dim H_(q-1)(F)", "∂_F"]);
    for q in 1..=e.index.top() {
        table.row(&[
            q.to_string(),
            e.index.dim(q).to_string(),
            e.h_f.dim(q - 1).to_string(),
            matrix_text(&e.emitter[q].to_strings()),
        ]);
    }
    let mut m = ctx.header("emit", &name);
    m.insert("index_dims".into(), json!(e.index.dims()));
    m.insert("f_cubes".into(), json!(e.index.pair.f_domain.tops().len()));
    m.insert("f_homology_dims".into(), json!(e.h_f.dims()));
    m.insert("unstable_steps".into(), json!(e.index.pair.wu_steps));
    m.insert("emitter".into(), blocks_json(&e.emitter));
    let text = format!("Emitter ∂_F : CH_q -> H_(q-1)(F) for pair {name}\n{}", table.render());
    Ok(Output::ok(Value::Object(m), text))
}

pub fn receive(ctx: &Context) -> Result<Output> {
    let (name, idx) = ctx.index()?;
    let f = &ctx.system.map;
    let rec = receiver_omega(f, idx)?;
    let mut table = Table::new(&["q", "dim H(N,K)", "dim CH_q", "ω"]);
    for q in 0..=rec.index.top() {
        table.row(&[
            q.to_string(),
            rec.h_nk.dim(q).to_string(),
            rec.index.dim(q).to_string(),
            matrix_text(&rec.omega[q].to_strings()),
        ]);
    }
    let mut m = ctx.header("receive", &name);
    m.insert("index_dims".into(), json!(rec.index.dims()));
    m.insert("nk_homology_dims".into(), json!(rec.h_nk.dims()));
    m.insert("omega".into(), blocks_json(&rec.omega));
    let mut text = format!("Receiver ω : H(N,K) -> CH for pair {name}\n{}", table.render());
    if let (Some(z), Some(z0)) = (&ctx.z, &ctx.z0) {
        let (zs, z0s) = (ctx.system.region(z)?, ctx.system.region(z0)?);
        let w = check_admissible(f, &rec.index.pair, zs, z0s, ctx.options.n_max, ctx.options.r_max)?;
        let big = receiver_Omega(f, &rec, &w)?;
        let mut t = Table::new(&["q", "dim H(Z,Z\\Z0)", "Ω"]);
        for (q, b) in big.blocks.iter().enumerate() {
            t.row(&[q.to_string(), big.h_z.dim(q).to_string(), matrix_text(&b.to_strings())]);
        }
        m.insert(
            "Omega".into(),
            json!({
                "z": z,
                "z0": z0,
                "n": w.n,
                "r": w.r,
                "source_dims": big.h_z.dims(),
                "blocks": blocks_json(&big.blocks),
            }),
        );
        text.push_str(&format!("\nΩ on (Z, Z0) = ({z}, {z0}) with n = {}, r = {}\n{}", w.n, w.r, t.render()));
    } else if ctx.z.is_some() || ctx.z0.is_some() {
        return Err(Error::Parse("--z and --z0 must be given together".into()));
    }
    Ok(Output::ok(Value::Object(m), text))
}

fn morse_json(rows: &[MorseRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "q": r.q, "ch_a": r.ch_a, "ch_r": r.ch_r, "ch_s": r.ch_s,
                    "rank_gamma_q": r.rank_q, "rank_gamma_q1": r.rank_q1, "holds": r.holds,
                })
            })
            .collect(),
    )
}

fn morse_table(rows: &[MorseRow]) -> String {
    let mut t = Table::new(&["q", "CH(A)", "CH(R)", "CH(S)", "rk Γ_q", "rk Γ_q+1", "check"]);
    for r in rows {
        let verdict = if r.holds { "PASS" } else { "FAIL" };
        t.row(&[
            r.q.to_string(),
            r.ch_a.to_string(),
            r.ch_r.to_string(),
            r.ch_s.to_string(),
            r.rank_q.to_string(),
            r.rank_q1.to_string(),
            verdict.to_string(),
        ]);
    }
    t.render()
}

pub fn morse(ctx: &Context) -> Result<Output> {
    let (name, t) = ctx.triple()?;
    let seq = conley_core::connection::ar_exact_sequence(&ctx.system.map, &t, ctx.field)?;
    let rows = morse_equation_check(&seq);
    let holds = rows.iter().all(|r| r.holds);
    let mut m = ctx.header("morse", &name);
    m.insert("holds".into(), json!(holds));
    m.insert("rows".into(), morse_json(&rows));
    let text = format!("dim CH_q(A) + dim CH_q(R) = dim CH_q(S) + rk Γ_q + rk Γ_q+1 for triple {name}\n{}", morse_table(&rows));
    Ok(Output { json: Value::Object(m), text, status: if holds { 0 } else { 3 } })
}

pub fn connect(ctx: &Context) -> Result<Output> {
    let (name, d) = ctx.decomposition()?;
    let cv = gamma_cross_validate(&d)?;
    let rows = morse_equation_check(&d.sequence);
    let bounds = gamma_rank_bound(&d);
    let seq = &d.sequence;
    let mut t = Table::new(&["q", "CH(A)", "CH(R)", "CH(S)", "Γ les", "Γ fact", "rk", "bound"]);
    for q in 0..=d.top() {
        let (les, fact) = (&d.gamma_les()[q], &d.gamma_fact[q]);
        let bound = bounds.iter().find(|b| b.q == q).map_or("-".to_string(), |b| b.bound.to_string());
        t.row(&[
            q.to_string(),
            seq.a.dim(q).to_string(),
            seq.r.dim(q).to_string(),
            seq.s.dim(q).to_string(),
            matrix_text(&les.to_strings()),
            matrix_text(&fact.to_strings()),
            les.rank().to_string(),
            bound,
        ]);
    }
    let morse_ok = rows.iter().all(|r| r.holds) && bounds.iter().all(|b| b.holds);
    let mut m = ctx.header("connect", &name);
    m.insert(
        "dims".into(),
        json!({ "A": seq.a.dims(), "R": seq.r.dims(), "S": seq.s.dims() }),
    );
    m.insert("gamma_les".into(), blocks_json(d.gamma_les()));
    m.insert("gamma_fact".into(), blocks_json(&d.gamma_fact));
    m.insert("cross_validation".into(), json!({ "equal": cv.equal, "ranks": cv.ranks }));
    m.insert(
        "witness".into(),
        json!({ "n": d.witness.n, "r": d.witness.r, "f_cubes": d.witness.z.tops().len(), "z0_cubes": d.witness.z0.len() }),
    );
    m.insert("morse".into(), morse_json(&rows));
    m.insert(
        "rank_bound".into(),
        Value::Array(bounds.iter().map(|b| json!({ "q": b.q, "rank": b.rank, "bound": b.bound, "holds": b.holds })).collect()),
    );
    let mut text = format!(
        "Connection map Γ : CH_q(R) -> CH_(q-1)(A) for triple {name} over {}\n{}cross-validation: {}\nwitness: n = {}, r = {}\n",
        ctx.field,
        t.render(),
        if cv.equal { "PASS" } else { "FAIL" },
        d.witness.n,
        d.witness.r,
    );
    match gamma_sum_decomposition(&ctx.system.map, &d) {
        Ok(sum) => {
            let mut st = Table::new(&["piece", "cubes", "Γ_q per degree"]);
            for (i, (piece, g)) in sum.pieces.iter().zip(&sum.gammas).enumerate() {
                let gs: Vec<String> = g.iter().skip(1).map(|b| matrix_text(&b.to_strings())).collect();
                st.row(&[i.to_string(), piece.tops().len().to_string(), gs.join(", ")]);
            }
            m.insert(
                "sum".into(),
                json!({
                    "radius": sum.radius,
                    "pieces": sum.pieces.iter().map(|p| p.tops().len()).collect::<Vec<_>>(),
                    "gammas": sum.gammas.iter().map(|g| blocks_json(g)).collect::<Vec<_>>(),
                }),
            );
            text.push_str(&format!("sum decomposition (radius {})\n{}", sum.radius, st.render()));
        }
        Err(e) => {
            m.insert("sum".into(), json!({ "error": e.code(), "message": e.to_string() }));
            text.push_str(&format!("sum decomposition unavailable: {} ({})\n", e, e.code()));
        }
    }
    text.push_str(&format!("Morse equation and rank bound: {}\n", if morse_ok { "PASS" } else { "FAIL" }));
    Ok(Output { json: Value::Object(m), text, status: if morse_ok { 0 } else { 3 } })
}
