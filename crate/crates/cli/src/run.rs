use std::f64::consts::PI;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use braidbook::braid::{artin_to_band, band_to_artin, word_invariants, ArtinWord, BandWord};
use braidbook::cactus::{
    boundary_rotate, condition9, count_cacti, enumerate_cacti, hurwitz_move, transposition_graph,
    validate_cactus, Cactus, HurwitzDir, RotateDir,
};
use braidbook::ladder::{braid3_decide, find_passes, ladder_from_word, sufficient_condition, verify_certificate};
use braidbook::polyloop::{
    braid_projection, cactus_of_polynomial, critical_data, fiber_enumeration, lift_cv_loop, monodromy,
    pfib_check, pfib_check_source, riemann_hurwitz, Pin, SampledPolyLoop, Tolerances,
};
use braidbook::rampichini::{
    script_valid, search_all_conjugates, search_braidable, synthesize_diagram, validate_diagram, MoveScript,
    SearchBounds, Status,
};
use braidbook::svg;
use num_complex::Complex64 as C;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<braidbook::Error> for Failure {
    fn from(e: braidbook::Error) -> Self {
        Failure {
            code: if e.is_numerical() { 4 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Out = Result<(Value, u8), Failure>;

#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs: Value,
    result: Value,
    tolerances: Value,
    tool_version: &'static str,
    timing_ms: f64,
}

/// Builds the report. Timing is collected once at top level, so per-search
/// `millis` fields are dropped from the result to keep it reproducible.
fn report(command: &str, inputs: Value, result: impl Serialize, tolerances: Value, clock: Instant) -> Value {
    let mut result = serde_json::to_value(result).expect("results serialize");
    strip_millis(&mut result);
    serde_json::to_value(RunReport {
        command: command.into(),
        inputs,
        result,
        tolerances,
        tool_version: env!("CARGO_PKG_VERSION"),
        timing_ms: clock.elapsed().as_secs_f64() * 1e3,
    })
    .expect("reports serialize")
}

fn strip_millis(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("millis");
            m.values_mut().for_each(strip_millis);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_millis),
        _ => {}
    }
}

fn band(s: &str) -> Result<BandWord, Failure> {
    s.parse().map_err(|e: braidbook::Error| input_error(e.to_string()))
}

fn read_text(p: &Path) -> Result<String, Failure> {
    if p == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_error(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(p).map_err(|e| input_error(format!("{}: {e}", p.display())))
    }
}

fn read_script(p: &Path) -> Result<MoveScript, Failure> {
    serde_json::from_str(&read_text(p)?).map_err(|e| input_error(format!("move script: {e}")))
}

/// Writes next to the target and renames, so readers never see a partial file.
fn write_svg(path: &Path, body: &str) -> Result<(), Failure> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, body)
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn complex(tok: &str) -> Result<C, Failure> {
    let parts: Vec<&str> = tok.split(',').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| input_error(format!("bad number `{s}`")));
    match parts.as_slice() {
        [re] => Ok(C::new(num(re)?, 0.0)),
        [re, im] => Ok(C::new(num(re)?, num(im)?)),
        _ => Err(input_error(format!("expected `re,im`, got `{tok}`"))),
    }
}

fn complex_list(s: &str) -> Result<Vec<C>, Failure> {
    s.split_whitespace().map(complex).collect()
}

fn pair(z: C) -> [f64; 2] {
    [z.re, z.im]
}

fn builtin_source(b: Builtin) -> (usize, fn(f64) -> Vec<C>) {
    match b {
        Builtin::Square => (2, |t| vec![-C::from_polar(1.0, t), C::new(0.0, 0.0)]),
        Builtin::Cubic => (3, |t| vec![C::from_polar(1.0, t), C::new(-0.27, 0.0), C::new(0.0, 0.0)]),
        Builtin::Reversing => (2, |t| vec![C::from_polar(1.0, t.sin()), C::new(0.0, 0.0)]),
    }
}

fn load_loop(input: &LoopInput) -> Result<(SampledPolyLoop, Value), Failure> {
    if input.samples < 3 {
        return Err(input_error("need at least 3 samples"));
    }
    if let Some(b) = input.builtin {
        let (n, f) = builtin_source(b);
        let lp = SampledPolyLoop::sample_coeffs(n, input.samples, f)?;
        let name = format!("{b:?}").to_lowercase();
        return Ok((lp, json!({"builtin": name, "samples": input.samples})));
    }
    let path = input.input.as_ref().ok_or_else(|| input_error("no loop given"))?;
    let lp: SampledPolyLoop =
        serde_json::from_str(&read_text(path)?).map_err(|e| input_error(format!("loop: {e}")))?;
    Ok((lp, json!({"file": path.display().to_string()})))
}

fn tolerances(tol_rate: Option<f64>) -> Tolerances {
    let mut t = Tolerances::default();
    if let Some(r) = tol_rate {
        t.tol_rate = r;
    }
    t
}

fn tol_json(t: &Tolerances) -> Value {
    serde_json::to_value(t).expect("tolerances serialize")
}

pub fn dispatch(cmd: &Command) -> Out {
    let clock = Instant::now();
    match cmd {
        Command::Convert { word, artin } => {
            let as_artin = *artin || !word.contains(':');
            let result = if as_artin {
                let w: ArtinWord = word.parse().map_err(|e: braidbook::Error| input_error(e.to_string()))?;
                json!({"artin": w.to_string(), "band": artin_to_band(&w).to_string()})
            } else {
                let w = band(word)?;
                json!({"band": w.to_string(), "artin": band_to_artin(&w).to_string()})
            };
            Ok((report("convert", json!({"word": word}), result, Value::Null, clock), 0))
        }
        Command::Analyze { word } => {
            let w = band(word)?;
            let (perm, stats) = word_invariants(&w);
            let result = json!({
                "word": w.to_string(),
                "permutation": perm.one_line(),
                "cycles": perm.cycles(),
                "exponent_sum": w.exponent_sum(),
                "surface": stats,
            });
            Ok((report("analyze", json!({"word": word}), result, Value::Null, clock), 0))
        }
        Command::Cacti(c) => cacti(c, clock),
        Command::Search {
            word,
            all_conjugates,
            bounds,
            render,
        } => {
            let w = band(word)?;
            let b = SearchBounds {
                max_states: bounds.max_states,
            };
            let inputs = json!({"word": w.to_string(), "all_conjugates": all_conjugates, "max_states": b.max_states});
            let (status, result, script) = if *all_conjugates {
                let r = search_all_conjugates(&w, b);
                let script = r.results.iter().find_map(|(_, v)| v.script.clone());
                (r.status, serde_json::to_value(&r).expect("serialize"), script)
            } else {
                let v = search_braidable(&w, b);
                (v.status, serde_json::to_value(&v).expect("serialize"), v.script)
            };
            if let (Some(path), Some(s)) = (&render.render, &script) {
                write_svg(path, &svg::diagram_svg(&synthesize_diagram(s)?))?;
            }
            let code = if status == Status::Exhausted { 3 } else { 0 };
            Ok((report("search", inputs, result, Value::Null, clock), code))
        }
        Command::ValidateScript { script, render } => {
            let s = read_script(script)?;
            let script_report = script_valid(&s);
            let diagram = if script_report.valid {
                let d = synthesize_diagram(&s)?;
                if let Some(path) = &render.render {
                    write_svg(path, &svg::diagram_svg(&d))?;
                }
                Some(validate_diagram(&d))
            } else {
                None
            };
            let result = json!({"script": script_report, "diagram": diagram});
            Ok((
                report("validate-script", json!({"script": script.display().to_string()}), result, Value::Null, clock),
                0,
            ))
        }
        Command::Ladder(l) => ladder(l, clock),
        Command::Pfib(p) => pfib(p, clock),
        Command::Rh { n, b } => Ok((
            report("rh", json!({"n": n, "b": b}), riemann_hurwitz(*n, *b), Value::Null, clock),
            0,
        )),
        Command::Render(r) => render_cmd(r, clock),
    }
}

fn cacti(c: &CactiCommand, clock: Instant) -> Out {
    match c {
        CactiCommand::Enumerate { n, count_only } => {
            let inputs = json!({"n": n, "count_only": count_only});
            let result = if *count_only {
                json!({"n": n, "count": count_cacti(*n)?})
            } else {
                let all = enumerate_cacti(*n)?;
                let list: Vec<String> = all.iter().map(|c| c.to_string()).collect();
                json!({"n": n, "count": all.len(), "cacti": list})
            };
            Ok((report("cacti enumerate", inputs, result, Value::Null, clock), 0))
        }
        CactiCommand::Move {
            cactus,
            hurwitz,
            dir,
            rotate,
        } => {
            let c: Cactus = cactus.parse().map_err(|e: braidbook::Error| input_error(e.to_string()))?;
            let moved = match (hurwitz, dir, rotate) {
                (Some(i), Some(d), None) => hurwitz_move(
                    &c,
                    *i,
                    match d {
                        HurwitzArg::Under => HurwitzDir::Under,
                        HurwitzArg::Over => HurwitzDir::Over,
                    },
                )?,
                (None, None, Some(r)) => boundary_rotate(
                    &c,
                    match r {
                        RotateArg::Forward => RotateDir::Forward,
                        RotateArg::Backward => RotateDir::Backward,
                    },
                )?,
                _ => return Err(input_error("give either --hurwitz I --dir D or --rotate R")),
            };
            let (edges, tree) = transposition_graph(&moved);
            let result = json!({
                "before": c.to_string(),
                "after": moved.to_string(),
                "valid": validate_cactus(&moved),
                "tree": tree,
                "edges": edges,
                "condition": condition9(moved.n, &moved.taus),
            });
            let inputs = json!({"cactus": cactus, "hurwitz": hurwitz, "dir": dir.map(|d| format!("{d:?}").to_lowercase()), "rotate": rotate.map(|r| format!("{r:?}").to_lowercase())});
            Ok((report("cacti move", inputs, result, Value::Null, clock), 0))
        }
    }
}

fn ladder(l: &LadderCommand, clock: Instant) -> Out {
    match l {
        LadderCommand::Passes { word, render } => {
            let w = band(word)?;
            let d = ladder_from_word(&w);
            let cert = find_passes(&d);
            if let Some(path) = &render.render {
                write_svg(path, &svg::ladder_svg(&d, cert.as_ref()))?;
            }
            let verified = cert.as_ref().map(|c| verify_certificate(&d, c).is_ok());
            let result = json!({"found": cert.is_some(), "certificate": cert, "verified": verified});
            Ok((report("ladder passes", json!({"word": w.to_string()}), result, Value::Null, clock), 0))
        }
        LadderCommand::Braid3 { word, render } => {
            let w = band(word)?;
            let cert = braid3_decide(&w)?;
            if let (Some(path), Some(c)) = (&render.render, &cert) {
                write_svg(path, &svg::ladder_svg(&ladder_from_word(&c.word), Some(&c.passes)))?;
            }
            let result = json!({"found": cert.is_some(), "certificate": cert});
            Ok((report("ladder braid3", json!({"word": w.to_string()}), result, Value::Null, clock), 0))
        }
        LadderCommand::Sufficient { word } => {
            let w = band(word)?;
            let result = json!({"sufficient": sufficient_condition(&w)});
            Ok((report("ladder sufficient", json!({"word": w.to_string()}), result, Value::Null, clock), 0))
        }
    }
}

fn pfib(p: &PfibCommand, clock: Instant) -> Out {
    match p {
        PfibCommand::Check { input, tol, render } => {
            let t = tolerances(Some(tol.tol_rate));
            let (lp, inputs) = load_loop(input)?;
            let cd = critical_data(&lp, &t)?;
            let cert = match input.builtin {
                Some(b) => {
                    let (n, f) = builtin_source(b);
                    pfib_check_source(n, input.samples, &f, &t)?
                }
                None => pfib_check(&cd, t.tol_rate),
            };
            if let Some(path) = &render.render {
                write_svg(path, &svg::critical_values_svg(&cd))?;
            }
            Ok((report("pfib check", inputs, cert, tol_json(&t), clock), 0))
        }
        PfibCommand::Braid { input } => {
            let t = tolerances(None);
            let (lp, inputs) = load_loop(input)?;
            let (w, theta) = braid_projection(&lp, &t)?;
            let result = json!({
                "word": w.to_string(),
                "letters": w.letters,
                "permutation": w.permutation().one_line(),
                "projection_angle": theta,
            });
            Ok((report("pfib braid", inputs, result, tol_json(&t), clock), 0))
        }
        PfibCommand::Monodromy { coeffs, circle, path } => {
            let t = tolerances(None);
            let a = complex_list(coeffs)?;
            if a.is_empty() {
                return Err(input_error("no coefficients"));
            }
            let inputs = json!({"coeffs": a.iter().copied().map(pair).collect::<Vec<_>>(), "circle": circle, "path": path.as_ref().map(|p| p.display().to_string())});
            let loop_path: Option<Vec<C>> = if let Some(text) = circle {
                let nums: Vec<f64> = text
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| input_error(format!("bad number `{s}`"))))
                    .collect::<Result<_, _>>()?;
                let [cre, cim, r] = nums[..] else {
                    return Err(input_error("--circle expects `cre,cim,r`"));
                };
                let steps = 512;
                Some(
                    (0..steps)
                        .map(|k| C::new(cre, cim) + C::from_polar(r, 2.0 * PI * k as f64 / steps as f64))
                        .collect(),
                )
            } else if let Some(p) = path {
                let pts: Vec<[f64; 2]> =
                    serde_json::from_str(&read_text(p)?).map_err(|e| input_error(format!("path: {e}")))?;
                Some(pts.into_iter().map(|[re, im]| C::new(re, im)).collect())
            } else {
                None
            };
            let result = match loop_path {
                Some(lp) if lp.len() >= 2 => {
                    let perm = monodromy(&a, &lp, &t)?;
                    json!({"permutation": perm.one_line(), "cycles": perm.cycles()})
                }
                Some(_) => return Err(input_error("path needs at least two points")),
                None => {
                    let c = cactus_of_polynomial(&a, &t)?;
                    let (edges, tree) = transposition_graph(&c);
                    json!({"cactus": c.to_string(), "taus": c.taus, "valid": validate_cactus(&c), "tree": tree, "edges": edges})
                }
            };
            Ok((report("pfib monodromy", inputs, result, tol_json(&t), clock), 0))
        }
        PfibCommand::Lift { input, pin } => {
            let t = tolerances(None);
            let (lp, mut inputs) = load_loop(input)?;
            let pin = match pin {
                PinArg::Subleading => Pin::Subleading,
                PinArg::Constant => Pin::Constant,
            };
            inputs["pin"] = serde_json::to_value(pin).expect("serialize");
            let cd = critical_data(&lp, &t)?;
            let lift = lift_cv_loop(&lp.coeffs[0], &cd.values, pin, &t)?;
            let coeff_error = lp
                .coeffs
                .iter()
                .zip(&lift.samples.coeffs)
                .flat_map(|(x, y)| x.iter().zip(y).map(|(a, b)| (a - b).norm()))
                .fold(0.0, f64::max);
            let lifted = critical_data(&lift.samples, &t)?;
            let cv_error = cd
                .values
                .iter()
                .flat_map(|strand| {
                    let lifted = &lifted;
                    strand.iter().enumerate().map(move |(k, v)| {
                        lifted.values.iter().map(|s| (s[k] - v).norm()).fold(f64::INFINITY, f64::min)
                    })
                })
                .fold(0.0, f64::max);
            let result = json!({
                "closed": lift.closed,
                "end": lift.end.iter().copied().map(pair).collect::<Vec<_>>(),
                "max_coefficient_error": coeff_error,
                "max_critical_value_error": cv_error,
            });
            Ok((report("pfib lift", inputs, result, tol_json(&t), clock), 0))
        }
        PfibCommand::Fiber { values, attempts, seed } => {
            let t = tolerances(None);
            let target = complex_list(values)?;
            let r = fiber_enumeration(&target, *attempts, *seed, &t)?;
            let result = json!({
                "n": r.n,
                "count": r.polynomials.len(),
                "polynomials": r.polynomials.iter().map(|p| p.iter().copied().map(pair).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "attempts": r.attempts,
                "failures": r.failures,
            });
            let inputs = json!({"values": target.iter().copied().map(pair).collect::<Vec<_>>(), "attempts": attempts, "seed": seed});
            Ok((report("pfib fiber", inputs, result, tol_json(&t), clock), 0))
        }
    }
}

fn render_cmd(r: &RenderCommand, clock: Instant) -> Out {
    let (what, inputs, out, body) = match r {
        RenderCommand::Diagram { script, out } => {
            let d = synthesize_diagram(&read_script(script)?)?;
            ("diagram", json!({"script": script.display().to_string()}), out, svg::diagram_svg(&d))
        }
        RenderCommand::Ladder { word, out } => {
            let w = band(word)?;
            let d = ladder_from_word(&w);
            let cert = find_passes(&d);
            ("ladder", json!({"word": w.to_string()}), out, svg::ladder_svg(&d, cert.as_ref()))
        }
        RenderCommand::Critical { input, out } => {
            let (lp, inputs) = load_loop(input)?;
            let cd = critical_data(&lp, &Tolerances::default())?;
            ("critical", inputs, out, svg::critical_values_svg(&cd))
        }
    };
    write_svg(out, &body)?;
    let result = json!({"written": out.display().to_string(), "bytes": body.len()});
    Ok((report(&format!("render {what}"), inputs, result, Value::Null, clock), 0))
}
