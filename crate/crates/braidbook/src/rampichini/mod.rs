//! Rampichini move scripts and the search for totally braided open books.
//!
//! A script starts from the band word on the page `φ = 0` and lists the
//! changes of the vertical reading as `φ` grows: BKL rewrites of adjacent
//! letters and conjugations, where a letter leaves the word through the
//! `t = 0` edge and reappears at the other end.
//!
//! Conventions. Each vertical line is read from the top (slot 0) down.
//! Positive letters rise in `t`, so a positive letter can leave only from the
//! front and re-enter at the end (`front_to_end`); negative letters go the
//! other way (`end_to_front`). Two adjacent letters can swap only if the upper
//! one does not rise while the lower one falls, so the sign transition
//! `(+,−) → (−,+)` never occurs. At `φ = 2π` the word must be the starting
//! word with every index shifted by `−1`, and the conjugated letters, in
//! order, must multiply to `(1 n n−1 … 2)`.

mod diagram;
mod heights;

use std::collections::HashMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::braid::{pair_rewrites, shift_indices, BandLetter, BandWord, Permutation};
use crate::cactus::{condition9, Condition9Report, Transposition};
use crate::error::{Error, Result};

pub use diagram::{
    synthesize_diagram, validate_diagram, Crossing, Curve, Diagram, DiagramReport, EdgeCrossing,
};
pub use heights::{solve_heights, Closure, HeightState, SlotMove, Weight};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjDir {
    EndToFront,
    FrontToEnd,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    /// Rewrite the letters at `pos`, `pos + 1` with `pair_rewrites(..)[choice]`.
    Bkl { pos: usize, choice: usize },
    Conj { dir: ConjDir },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "ScriptJson", into = "ScriptJson")]
pub struct MoveScript {
    pub n: usize,
    pub start: BandWord,
    pub events: Vec<Event>,
}

#[derive(Serialize, Deserialize)]
struct ScriptJson {
    n: usize,
    start: Vec<BandLetter>,
    events: Vec<Event>,
}

impl TryFrom<ScriptJson> for MoveScript {
    type Error = Error;

    fn try_from(s: ScriptJson) -> Result<Self> {
        Ok(MoveScript {
            n: s.n,
            start: BandWord::new(s.n, s.start)?,
            events: s.events,
        })
    }
}

impl From<MoveScript> for ScriptJson {
    fn from(s: MoveScript) -> Self {
        ScriptJson {
            n: s.n,
            start: s.start.letters,
            events: s.events,
        }
    }
}

impl MoveScript {
    pub fn conjugations(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, Event::Conj { .. }))
            .count()
    }
}

/// Applies one event, checking that it is legal.
pub fn apply_event(w: &BandWord, e: Event) -> Result<BandWord> {
    let mut letters = w.letters.clone();
    match e {
        Event::Bkl { pos, choice } => {
            if pos + 1 >= letters.len() {
                return Err(Error::PositionOutOfRange {
                    pos,
                    len: letters.len(),
                });
            }
            let (x, y) = (letters[pos], letters[pos + 1]);
            if x.is_positive() && !y.is_positive() {
                return Err(Error::IllegalEvent(format!(
                    "forbidden sign transition (+,-) -> (-,+) at {pos}: {x} {y}"
                )));
            }
            let rewrites = pair_rewrites(x, y);
            let r = rewrites.get(choice).ok_or_else(|| {
                Error::IllegalEvent(format!(
                    "no such rewrite: choice {choice} of {} for {x} {y}",
                    rewrites.len()
                ))
            })?;
            letters[pos] = r.left;
            letters[pos + 1] = r.right;
        }
        Event::Conj { dir } => match dir {
            ConjDir::FrontToEnd => match letters.first() {
                Some(l) if l.is_positive() => letters.rotate_left(1),
                Some(l) => {
                    return Err(Error::IllegalEvent(format!(
                        "front_to_end needs a positive first letter, found {l}"
                    )))
                }
                None => return Err(Error::IllegalEvent("conjugation of the empty word".into())),
            },
            ConjDir::EndToFront => match letters.last() {
                Some(l) if !l.is_positive() => letters.rotate_right(1),
                Some(l) => {
                    return Err(Error::IllegalEvent(format!(
                        "end_to_front needs a negative last letter, found {l}"
                    )))
                }
                None => return Err(Error::IllegalEvent("conjugation of the empty word".into())),
            },
        },
    }
    Ok(BandWord {
        n: w.n,
        letters,
    })
}

/// Slot motion of every letter across a legal event applied to `w`.
pub fn event_moves(w: &BandWord, e: Event) -> Vec<SlotMove> {
    let len = w.len();
    let dir = |s: usize| w.letters[s].sign;
    match e {
        Event::Bkl { pos, .. } => (0..len)
            .map(|s| {
                let to = if s == pos {
                    pos + 1
                } else if s == pos + 1 {
                    pos
                } else {
                    s
                };
                SlotMove { from: s, to, dir: dir(s), wrap: 0 }
            })
            .collect(),
        Event::Conj { dir: ConjDir::FrontToEnd } => (1..len)
            .map(|s| SlotMove { from: s, to: s - 1, dir: dir(s), wrap: 0 })
            .chain([SlotMove { from: 0, to: len - 1, dir: 1, wrap: 1 }])
            .collect(),
        Event::Conj { dir: ConjDir::EndToFront } => (0..len - 1)
            .map(|s| SlotMove { from: s, to: s + 1, dir: dir(s), wrap: 0 })
            .chain([SlotMove { from: len - 1, to: 0, dir: -1, wrap: -1 }])
            .collect(),
    }
}

/// The letter leaving through the `t = 0` edge, for a conjugation.
fn conjugated_letter(w: &BandWord, e: Event) -> Option<BandLetter> {
    match e {
        Event::Conj { dir: ConjDir::FrontToEnd } => w.letters.first().copied(),
        Event::Conj { dir: ConjDir::EndToFront } => w.letters.last().copied(),
        Event::Bkl { .. } => None,
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IllegalAt {
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ScriptReport {
    /// (a) every event legal in sequence.
    pub events_legal: bool,
    pub illegal: Option<IllegalAt>,
    /// (b) exactly `n − 1` conjugations.
    pub conjugations: usize,
    pub conjugation_count_ok: bool,
    pub final_word: Option<BandWord>,
    /// (c) the final word is the start shifted by `−1`.
    pub shift_ok: bool,
    /// (d) every closed lineage cycle contains a conjugation.
    pub lineage_cycles: Vec<Vec<usize>>,
    pub lineage_ok: bool,
    /// (d′) strictly monotone closed curves exist.
    pub realizable: bool,
    /// (e) the conjugated letters multiply to `(1 n … 2)`.
    pub row: Vec<Transposition>,
    pub row_product_ok: bool,
    /// Literal row bullets, advisory only.
    pub row_bullets: Option<Condition9Report>,
    pub valid: bool,
}

pub fn script_valid(s: &MoveScript) -> ScriptReport {
    let n = s.n;
    let len = s.start.len();
    let mut report = ScriptReport {
        events_legal: true,
        illegal: None,
        conjugations: s.conjugations(),
        conjugation_count_ok: s.conjugations() + 1 == n,
        final_word: None,
        shift_ok: false,
        lineage_cycles: Vec::new(),
        lineage_ok: false,
        realizable: false,
        row: Vec::new(),
        row_product_ok: false,
        row_bullets: None,
        valid: false,
    };
    if s.start.n != n {
        report.events_legal = false;
        report.illegal = Some(IllegalAt {
            index: 0,
            reason: format!("start word has n={} but script has n={n}", s.start.n),
        });
        return report;
    }
    let mut w = s.start.clone();
    // slot_of[lineage] = current slot; wrapped[lineage] = conjugated at least once.
    let mut slot_of: Vec<usize> = (0..len).collect();
    let mut wrapped = vec![false; len];
    let mut heights = Some(HeightState::new(len));
    for (index, &e) in s.events.iter().enumerate() {
        let next = match apply_event(&w, e) {
            Ok(next) => next,
            Err(err) => {
                report.events_legal = false;
                report.illegal = Some(IllegalAt {
                    index,
                    reason: err.to_string(),
                });
                return report;
            }
        };
        let moves = event_moves(&w, e);
        let mut new_slot = vec![0; len];
        let mut wraps = vec![false; len];
        for m in &moves {
            new_slot[m.from] = m.to;
            wraps[m.from] = m.wrap != 0;
        }
        for (lineage, slot) in slot_of.iter_mut().enumerate() {
            wrapped[lineage] |= wraps[*slot];
            *slot = new_slot[*slot];
        }
        if let Some(l) = conjugated_letter(&w, e) {
            report
                .row
                .push(Transposition::new(l.i, l.j).expect("letters join distinct strands"));
        }
        heights = heights.and_then(|h| h.step(&moves));
        w = next;
    }
    report.shift_ok = w == shift_indices(&s.start, -1);
    report.final_word = Some(w);

    // The final slot of a lineage continues as the lineage starting in that slot.
    let mut seen = vec![false; len];
    report.lineage_ok = true;
    for s0 in 0..len {
        if seen[s0] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = s0;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = slot_of[x];
        }
        if !cycle.iter().any(|&l| wrapped[l]) {
            report.lineage_ok = false;
        }
        report.lineage_cycles.push(cycle);
    }
    report.realizable = heights.is_some_and(|h| h.closes());
    let product = crate::cactus::product(n, &report.row);
    report.row_product_ok = report.conjugation_count_ok && product == Permutation::descending_cycle(n);
    if !report.row.is_empty() {
        report.row_bullets = Some(condition9(n, &report.row));
    }
    report.valid = report.events_legal
        && report.conjugation_count_ok
        && report.shift_ok
        && report.lineage_ok
        && report.realizable
        && report.row_product_ok;
    report
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Found,
    NotFound,
    Exhausted,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_states: Option<usize>,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub script: Option<MoveScript>,
    pub states: usize,
    pub millis: f64,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    word: Vec<BandLetter>,
    conj: usize,
    product: Permutation,
    heights: HeightState,
}

/// All events, in canonical order, together with their successor words.
fn successors(w: &BandWord, conj_left: bool) -> Vec<(Event, BandWord)> {
    let len = w.len();
    let mut out = Vec::new();
    for pos in 0..len.saturating_sub(1) {
        let (x, y) = (w.letters[pos], w.letters[pos + 1]);
        if x.is_positive() && !y.is_positive() {
            continue;
        }
        for choice in 0..pair_rewrites(x, y).len() {
            let e = Event::Bkl { pos, choice };
            if let Ok(next) = apply_event(w, e) {
                debug_assert!(
                    !(next.letters[pos].sign < 0 && next.letters[pos + 1].sign > 0 && x.sign > 0)
                );
                out.push((e, next));
            }
        }
    }
    if conj_left {
        for dir in [ConjDir::FrontToEnd, ConjDir::EndToFront] {
            let e = Event::Conj { dir };
            if let Ok(next) = apply_event(w, e) {
                out.push((e, next));
            }
        }
    }
    out
}

/// Breadth-first search for a valid move script starting at `w`.
pub fn search_braidable(w: &BandWord, bounds: SearchBounds) -> Verdict {
    let clock = Instant::now();
    let n = w.n;
    let len = w.len();
    let goal_word = shift_indices(w, -1).letters;
    let goal_product = Permutation::descending_cycle(n);
    let start = State {
        word: w.letters.clone(),
        conj: 0,
        product: Permutation::identity(n),
        heights: HeightState::new(len),
    };
    let mut states: Vec<(State, Option<(usize, Event)>)> = vec![(start.clone(), None)];
    let mut index: HashMap<State, usize> = HashMap::from([(start, 0)]);
    let mut head = 0;
    let finish = |status, script, states: usize| Verdict {
        status,
        script,
        states,
        millis: clock.elapsed().as_secs_f64() * 1e3,
    };
    while head < states.len() {
        let st = states[head].0.clone();
        let cur = head;
        head += 1;
        if st.conj + 1 == n
            && st.word == goal_word
            && st.product == goal_product
            && st.heights.closes()
        {
            let mut events = Vec::new();
            let mut k = cur;
            while let Some((parent, e)) = states[k].1 {
                events.push(e);
                k = parent;
            }
            events.reverse();
            let script = MoveScript {
                n,
                start: w.clone(),
                events,
            };
            return finish(Status::Found, Some(script), states.len());
        }
        let word = BandWord {
            n,
            letters: st.word.clone(),
        };
        for (e, next) in successors(&word, st.conj + 1 < n) {
            let Some(heights) = st.heights.step(&event_moves(&word, e)) else {
                continue;
            };
            let product = match conjugated_letter(&word, e) {
                Some(l) => st.product.then(&l.transposition(n)),
                None => st.product.clone(),
            };
            let conj = st.conj + usize::from(matches!(e, Event::Conj { .. }));
            let ns = State {
                word: next.letters,
                conj,
                product,
                heights,
            };
            if index.contains_key(&ns) {
                continue;
            }
            if bounds.max_states.is_some_and(|m| states.len() >= m) {
                return finish(Status::Exhausted, None, states.len());
            }
            index.insert(ns.clone(), states.len());
            states.push((ns, Some((cur, e))));
        }
    }
    finish(Status::NotFound, None, states.len())
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ConjugateSearch {
    pub status: Status,
    pub results: Vec<(BandWord, Verdict)>,
}

/// Runs the search on every cyclic conjugate of `w`, one thread per conjugate.
pub fn search_all_conjugates(w: &BandWord, bounds: SearchBounds) -> ConjugateSearch {
    let words = crate::braid::cyclic_conjugates(w);
    let results: Vec<(BandWord, Verdict)> = std::thread::scope(|scope| {
        let handles: Vec<_> = words
            .iter()
            .map(|c| scope.spawn(move || search_braidable(c, bounds)))
            .collect();
        words
            .iter()
            .cloned()
            .zip(handles.into_iter().map(|h| h.join().expect("search thread panicked")))
            .collect()
    });
    let status = if results.iter().any(|(_, v)| v.status == Status::Found) {
        Status::Found
    } else if results.iter().any(|(_, v)| v.status == Status::Exhausted) {
        Status::Exhausted
    } else {
        Status::NotFound
    };
    ConjugateSearch { status, results }
}
