//! Encoding and decoding against a codebook forest.

use std::fmt;

use rand::Rng;

use crate::channel::ChannelSpec;
use crate::region::{event_index, Role, Rx};

use super::forest::{CodebookForest, CondSampler, AXES, CLOUDS};
use super::typical::Checker;
use super::{Budget, LambdaOrder, SimConfig, SimError, Sizes, TypicalityParams};

/// Positions of `X1, X2, Y1, Y2` in the simulator's variable order.
const X1: usize = 9;
const X2: usize = 10;
const Y1: usize = 11;
const Y2: usize = 12;

/// Layers a receiver decodes, in scan order (each layer is also its own axis).
fn rx_layers(rx: Rx) -> [usize; 6] {
    match rx {
        Rx::One => [0, 1, 3, 4, 6, 7],
        Rx::Two => [0, 2, 3, 5, 6, 8],
    }
}

fn mask(vars: &[usize]) -> u64 {
    vars.iter().fold(0, |m, &v| m | 1 << v)
}

/// The nine message indices, in rate-name order, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Messages(pub [usize; 9]);

impl Messages {
    pub fn random<R: Rng + ?Sized>(sizes: &Sizes, rng: &mut R) -> Self {
        Self(std::array::from_fn(|k| rng.gen_range(0..sizes.messages[k])))
    }
}

/// Encoding failures of one transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EncodingEvents {
    /// No typical `(U0, V0)` bin pair.
    pub e1: bool,
    /// No typical transmitter-1 bin triple.
    pub e2: bool,
    /// No typical transmitter-2 bin triple.
    pub e3: bool,
    /// The designated codewords with both inputs are not jointly typical.
    pub e4: bool,
}

impl EncodingEvents {
    pub fn as_array(&self) -> [bool; 4] {
        [self.e1, self.e2, self.e3, self.e4]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeOutput {
    /// Designated combined (message, bin) index per axis.
    pub j9: [usize; 9],
    pub x1: Vec<u8>,
    pub x2: Vec<u8>,
    pub events: EncodingEvents,
}

/// Result of a decoder scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    None,
    Unique([usize; 9]),
    /// The first two typical tuples found in scan order.
    Ambiguous([usize; 9], [usize; 9]),
}

/// Outcome at one receiver, attributed to an error event by the set of
/// wrongly recovered codewords.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecodeLabel {
    /// Unique typical tuple carrying the transmitted messages.
    Correct,
    /// No typical tuple.
    NoTuple,
    /// Unique typical tuple with wrong messages, attributed to event `k`.
    Wrong(usize),
    /// Several typical tuples; `k` is the event of the first wrong one.
    Ambiguous(usize),
}

impl DecodeLabel {
    pub fn is_error(self) -> bool {
        self != DecodeLabel::Correct
    }
}

impl fmt::Display for DecodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeLabel::Correct => write!(f, "correct"),
            DecodeLabel::NoTuple => write!(f, "E0d"),
            DecodeLabel::Wrong(k) => write!(f, "E{k}d"),
            DecodeLabel::Ambiguous(k) => write!(f, "ambiguous:E{k}d"),
        }
    }
}

#[derive(Debug, Clone)]
struct ChannelSampler {
    cdf: Vec<Vec<f64>>,
    x2: usize,
    y2: usize,
}

impl ChannelSampler {
    fn new(ch: &ChannelSpec) -> Self {
        let (nx1, nx2) = (ch.x1.size(), ch.x2.size());
        let mut cdf = Vec::with_capacity(nx1 * nx2);
        for a in 0..nx1 {
            for b in 0..nx2 {
                let mut acc = 0.0;
                let mut c: Vec<f64> = ch
                    .row(a, b)
                    .iter()
                    .map(|p| {
                        acc += p;
                        acc
                    })
                    .collect();
                *c.last_mut().unwrap() = f64::INFINITY;
                cdf.push(c);
            }
        }
        Self {
            cdf,
            x2: nx2,
            y2: ch.y2.size(),
        }
    }

    fn transmit<R: Rng + ?Sized>(&self, x1: &[u8], x2: &[u8], rng: &mut R) -> (Vec<u8>, Vec<u8>) {
        let mut y1 = Vec::with_capacity(x1.len());
        let mut y2 = Vec::with_capacity(x1.len());
        for (&a, &b) in x1.iter().zip(x2) {
            let u: f64 = rng.gen();
            let row = &self.cdf[a as usize * self.x2 + b as usize];
            let c = row.iter().position(|&t| u < t).unwrap();
            y1.push((c / self.y2) as u8);
            y2.push((c % self.y2) as u8);
        }
        (y1, y2)
    }
}

/// Bin search for one transmitter: checkers on (common, W_t), (common, W_t, U_t),
/// (common, W_t, V_t) and the whole six-tuple.
#[derive(Debug, Clone)]
struct TxCheckers {
    axes: [usize; 3],
    w: Checker,
    u: Checker,
    v: Checker,
    all: Checker,
}

/// Samplers and typicality checkers derived once from a configuration.
#[derive(Debug, Clone)]
pub struct Engine {
    pub typ: TypicalityParams,
    pub sizes: Sizes,
    pub budget: Budget,
    pub ord2: LambdaOrder,
    pub ord3: LambdaOrder,
    layer_samplers: Vec<CondSampler>,
    x1: CondSampler,
    x2: CondSampler,
    channel: ChannelSampler,
    u0: Checker,
    v0: Checker,
    common: Checker,
    tx: [TxCheckers; 2],
    full: Checker,
    rx: [Vec<Checker>; 2],
}

impl Engine {
    pub fn new(cfg: &SimConfig) -> Result<Self, SimError> {
        let j = &cfg.joint;
        let typ = cfg.typ;
        let ck = |vars: &[usize]| Checker::from_joint(j, mask(vars), typ);
        let layer_samplers = (0..9).map(|l| CondSampler::new(j, CLOUDS[l], l)).collect();
        let tx = |w: usize, u: usize, v: usize| TxCheckers {
            axes: [w, u, v],
            w: ck(&[0, 1, 2, w]),
            u: ck(&[0, 1, 2, w, u]),
            v: ck(&[0, 1, 2, w, v]),
            all: ck(&[0, 1, 2, w, u, v]),
        };
        let rx = |r: Rx, y: usize| {
            let ls = rx_layers(r);
            (0..6)
                .map(|k| {
                    let mut vars = ls[..=k].to_vec();
                    vars.push(y);
                    ck(&vars)
                })
                .collect()
        };
        Ok(Self {
            typ,
            sizes: cfg.sizes()?,
            budget: cfg.budget,
            ord2: cfg.ord2,
            ord3: cfg.ord3,
            layer_samplers,
            x1: CondSampler::new(j, &[0, 1, 2, 3, 4, 5], X1),
            x2: CondSampler::new(j, &[0, 1, 2, 6, 7, 8], X2),
            channel: ChannelSampler::new(&cfg.channel),
            u0: ck(&[0, 1]),
            v0: ck(&[0, 2]),
            common: ck(&[0, 1, 2]),
            tx: [tx(3, 4, 5), tx(6, 7, 8)],
            full: ck(&(0..11).collect::<Vec<_>>()),
            rx: [rx(Rx::One, Y1), rx(Rx::Two, Y2)],
        })
    }

    pub fn generate_forest<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<CodebookForest, SimError> {
        CodebookForest::generate(self.typ.n, &self.sizes, &self.layer_samplers, &self.budget, rng)
    }

    /// Passes the inputs through the channel.
    pub fn transmit<R: Rng + ?Sized>(&self, x1: &[u8], x2: &[u8], rng: &mut R) -> (Vec<u8>, Vec<u8>) {
        self.channel.transmit(x1, x2, rng)
    }

    /// Whether the designated codewords and inputs are jointly typical.
    pub fn designated_typical(&self, forest: &CodebookForest, out: &EncodeOutput) -> bool {
        let mut seqs: Vec<&[u8]> = (0..9).map(|l| forest.codeword(l, &out.j9)).collect();
        seqs.push(&out.x1);
        seqs.push(&out.x2);
        self.full.check(&seqs, &mut Vec::new())
    }
}

/// Picks the designated bins, then draws the channel inputs.
pub fn encode<R: Rng + ?Sized>(
    engine: &Engine,
    forest: &CodebookForest,
    msgs: &Messages,
    rng: &mut R,
) -> Result<EncodeOutput, SimError> {
    let sz = &engine.sizes;
    if (0..9).any(|k| msgs.0[k] >= sz.messages[k]) {
        return Err(SimError::MessageOutOfRange);
    }
    let mut scratch = Vec::new();
    let mut j9: [usize; 9] = std::array::from_fn(|k| sz.join(k, msgs.0[k], 0));
    let mut events = EncodingEvents::default();
    let w0 = forest.codeword(0, &j9).to_vec();

    // Step 1: the pair of common-layer bins.
    let pass = |axis: usize, ck: &Checker, j9: &mut [usize; 9], scratch: &mut Vec<u32>| -> Vec<usize> {
        (0..sz.bins[axis])
            .filter(|&b| {
                j9[axis] = sz.join(axis, msgs.0[axis], b);
                ck.check(&[&w0, forest.codeword(axis, j9)], scratch)
            })
            .collect()
    };
    let l1 = pass(1, &engine.u0, &mut j9, &mut scratch);
    let l2 = pass(2, &engine.v0, &mut j9, &mut scratch);
    let mut cands = Vec::new();
    for &b1 in &l1 {
        j9[1] = sz.join(1, msgs.0[1], b1);
        for &b2 in &l2 {
            j9[2] = sz.join(2, msgs.0[2], b2);
            let s = [&w0[..], forest.codeword(1, &j9), forest.codeword(2, &j9)];
            if engine.common.check(&s, &mut scratch) {
                cands.push(vec![b1, b2]);
            }
        }
    }
    let chosen = engine.ord2.min(&cands, &[sz.bins[1], sz.bins[2]]).cloned();
    events.e1 = chosen.is_none();
    let chosen = chosen.unwrap_or(vec![0, 0]);
    j9[1] = sz.join(1, msgs.0[1], chosen[0]);
    j9[2] = sz.join(2, msgs.0[2], chosen[1]);

    // Steps 2 and 3: one bin triple per transmitter, common bins frozen.
    for (t, tc) in engine.tx.iter().enumerate() {
        let [w, u, v] = tc.axes;
        let mut cands = Vec::new();
        for bw in 0..sz.bins[w] {
            j9[w] = sz.join(w, msgs.0[w], bw);
            let base = [forest.codeword(0, &j9), forest.codeword(1, &j9), forest.codeword(2, &j9), forest.codeword(w, &j9)];
            if !tc.w.check(&base, &mut scratch) {
                continue;
            }
            let mut lu = Vec::new();
            for bu in 0..sz.bins[u] {
                j9[u] = sz.join(u, msgs.0[u], bu);
                let s = [base[0], base[1], base[2], base[3], forest.codeword(u, &j9)];
                if tc.u.check(&s, &mut scratch) {
                    lu.push(bu);
                }
            }
            let mut lv = Vec::new();
            for bv in 0..sz.bins[v] {
                j9[v] = sz.join(v, msgs.0[v], bv);
                let s = [base[0], base[1], base[2], base[3], forest.codeword(v, &j9)];
                if tc.v.check(&s, &mut scratch) {
                    lv.push(bv);
                }
            }
            for &bu in &lu {
                j9[u] = sz.join(u, msgs.0[u], bu);
                for &bv in &lv {
                    j9[v] = sz.join(v, msgs.0[v], bv);
                    let s = [
                        base[0],
                        base[1],
                        base[2],
                        base[3],
                        forest.codeword(u, &j9),
                        forest.codeword(v, &j9),
                    ];
                    if tc.all.check(&s, &mut scratch) {
                        cands.push(vec![bw, bu, bv]);
                    }
                }
            }
        }
        let chosen = engine
            .ord3
            .min(&cands, &[sz.bins[w], sz.bins[u], sz.bins[v]])
            .cloned();
        if t == 0 {
            events.e2 = chosen.is_none();
        } else {
            events.e3 = chosen.is_none();
        }
        let chosen = chosen.unwrap_or(vec![0, 0, 0]);
        for (&axis, &b) in tc.axes.iter().zip(&chosen) {
            j9[axis] = sz.join(axis, msgs.0[axis], b);
        }
    }

    let n = engine.typ.n;
    let mut x1 = Vec::with_capacity(n);
    let p1: Vec<&[u8]> = [0, 1, 2, 3, 4, 5].iter().map(|&l| forest.codeword(l, &j9)).collect();
    engine.x1.sample(&p1, n, rng, &mut x1);
    let mut x2 = Vec::with_capacity(n);
    let p2: Vec<&[u8]> = [0, 1, 2, 6, 7, 8].iter().map(|&l| forest.codeword(l, &j9)).collect();
    engine.x2.sample(&p2, n, rng, &mut x2);
    let mut out = EncodeOutput {
        j9,
        x1,
        x2,
        events,
    };
    out.events.e4 = !engine.designated_typical(forest, &out);
    Ok(out)
}

/// Exhaustive typicality scan over every index tuple the receiver decodes.
/// Stops once a second typical tuple is found.
pub fn decode(engine: &Engine, forest: &CodebookForest, y: &[u8], rx: Rx) -> Result<Decoded, SimError> {
    if y.len() != engine.typ.n {
        return Err(SimError::LengthMismatch {
            expected: engine.typ.n,
            got: y.len(),
        });
    }
    let ls = rx_layers(rx);
    let space: u128 = ls.iter().map(|&l| engine.sizes.axis(l) as u128).product();
    engine.budget.check("decoder scan", space, engine.budget.scan)?;
    let checkers = &engine.rx[rx.index() - 1];
    let mut found = Vec::new();
    let mut j9 = [0usize; 9];
    let mut scratch = Vec::new();
    scan(engine, forest, y, &ls, checkers, 0, &mut j9, &mut found, &mut scratch);
    Ok(match found.len() {
        0 => Decoded::None,
        1 => Decoded::Unique(found[0]),
        _ => Decoded::Ambiguous(found[0], found[1]),
    })
}

#[allow(clippy::too_many_arguments)]
fn scan(
    engine: &Engine,
    forest: &CodebookForest,
    y: &[u8],
    ls: &[usize; 6],
    checkers: &[Checker],
    level: usize,
    j9: &mut [usize; 9],
    found: &mut Vec<[usize; 9]>,
    scratch: &mut Vec<u32>,
) {
    let l = ls[level];
    for j in 0..engine.sizes.axis(l) {
        j9[l] = j;
        let mut seqs: [&[u8]; 7] = [&[]; 7];
        for (k, &lk) in ls[..=level].iter().enumerate() {
            seqs[k] = forest.codeword(lk, j9);
        }
        seqs[level + 1] = y;
        if !checkers[level].check(&seqs[..level + 2], scratch) {
            continue;
        }
        if level == 5 {
            found.push(*j9);
        } else {
            scan(engine, forest, y, ls, checkers, level + 1, j9, found, scratch);
        }
        if found.len() >= 2 {
            return;
        }
    }
}

/// Roles whose codeword differs between `got` and `sent` at receiver `rx`.
/// A codeword is wrong when any index on its path from the root differs.
pub fn wrong_roles(got: &[usize; 9], sent: &[usize; 9], rx: Rx) -> Vec<Role> {
    let ls = rx_layers(rx);
    Role::ALL
        .iter()
        .zip(ls)
        .filter(|(_, l)| AXES[*l].iter().any(|&k| got[k] != sent[k]))
        .map(|(r, _)| *r)
        .collect()
}

/// Attributes a decoder result given the transmitted indices.
pub fn label(decoded: &Decoded, sent: &[usize; 9], rx: Rx, sizes: &Sizes) -> DecodeLabel {
    let event = |got: &[usize; 9]| {
        event_index(&wrong_roles(got, sent, rx)).expect("wrong sets are closed under clouds")
    };
    match decoded {
        Decoded::None => DecodeLabel::NoTuple,
        Decoded::Unique(got) => {
            let same = rx_layers(rx)
                .iter()
                .all(|&k| sizes.message(k, got[k]) == sizes.message(k, sent[k]));
            if same {
                DecodeLabel::Correct
            } else {
                DecodeLabel::Wrong(event(got))
            }
        }
        Decoded::Ambiguous(a, b) => {
            let differs = |t: &[usize; 9]| rx_layers(rx).iter().any(|&k| t[k] != sent[k]);
            let first = if differs(a) { a } else { b };
            DecodeLabel::Ambiguous(event(first))
        }
    }
}
