//! Linear deterministic networks: the general two-user network and the
//! symmetric `L`-user network, their transfer matrices and the degeneracy
//! classification.
//!
//! Levels are numbered from the top: level 1 is row 0 of a transmitted
//! vector. A link carrying `k` levels delivers the top `k` transmitted levels
//! to the bottom `k` received levels, i.e. it applies `G^(q-k)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::gf2::{shift_matrix, Gf2Matrix};
use crate::Rate;

/// `n_ij` is the number of levels from transmitter `i` to receiver `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetworkParams2x2 {
    pub n11: u32,
    pub n12: u32,
    pub n21: u32,
    pub n22: u32,
}

impl NetworkParams2x2 {
    pub fn new(n11: u32, n12: u32, n21: u32, n22: u32) -> Self {
        Self { n11, n12, n21, n22 }
    }

    /// The two-user symmetric network: direct links `n`, cross links `m`.
    pub fn symmetric(m: u32, n: u32) -> Self {
        Self::new(n, m, m, n)
    }

    pub fn q(&self) -> u32 {
        self.n11.max(self.n12).max(self.n21).max(self.n22)
    }

    /// Levels from transmitter `tx` to receiver `rx`, both zero-based.
    pub fn link(&self, tx: usize, rx: usize) -> u32 {
        match (tx, rx) {
            (0, 0) => self.n11,
            (0, 1) => self.n12,
            (1, 0) => self.n21,
            (1, 1) => self.n22,
            _ => panic!("two-user network has no link ({tx},{rx})"),
        }
    }

    pub fn as_symmetric(&self) -> Option<NetworkParamsSym> {
        (self.n11 == self.n22 && self.n12 == self.n21)
            .then(|| NetworkParamsSym::new(self.n12, self.n11, 2).ok())
            .flatten()
    }

    pub fn min_link(&self) -> u32 {
        self.n11.min(self.n12).min(self.n21).min(self.n22)
    }
}

/// Symmetric `L`-user network: `n` levels on direct links, `m` on cross links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SymJson", into = "SymJson")]
pub struct NetworkParamsSym {
    m: u32,
    n: u32,
    users: usize,
}

impl NetworkParamsSym {
    pub fn new(m: u32, n: u32, users: usize) -> Result<Self> {
        if users < 2 {
            return Err(Error::InvalidParams(format!(
                "need at least two users, got L = {users}"
            )));
        }
        Ok(Self { m, n, users })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn q(&self) -> u32 {
        self.m.max(self.n)
    }

    /// `min(m, n) / q`; `None` for the empty network.
    pub fn alpha(&self) -> Option<Rate> {
        let q = self.q();
        (q > 0).then(|| Rate::new(i64::from(self.m.min(self.n)), i64::from(q)))
    }

    pub fn link(&self, tx: usize, rx: usize) -> u32 {
        if tx == rx {
            self.n
        } else {
            self.m
        }
    }

    pub fn to_2x2(&self) -> Option<NetworkParams2x2> {
        (self.users == 2).then(|| NetworkParams2x2::symmetric(self.m, self.n))
    }
}

#[derive(Serialize, Deserialize)]
struct SymJson {
    m: u32,
    n: u32,
    #[serde(rename = "L")]
    users: usize,
}

impl From<NetworkParamsSym> for SymJson {
    fn from(p: NetworkParamsSym) -> Self {
        Self {
            m: p.m,
            n: p.n,
            users: p.users,
        }
    }
}

impl TryFrom<SymJson> for NetworkParamsSym {
    type Error = Error;

    fn try_from(j: SymJson) -> Result<Self> {
        Self::new(j.m, j.n, j.users)
    }
}

/// Either network family. Serialized as `{"kind":"sym","m":3,"n":4,"L":2}` or
/// `{"kind":"2x2","n11":..,"n12":..,"n21":..,"n22":..}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Network {
    #[serde(rename = "2x2")]
    General(NetworkParams2x2),
    #[serde(rename = "sym")]
    Symmetric(NetworkParamsSym),
}

impl Network {
    pub fn users(&self) -> usize {
        match self {
            Network::General(_) => 2,
            Network::Symmetric(p) => p.users(),
        }
    }

    pub fn q(&self) -> u32 {
        match self {
            Network::General(p) => p.q(),
            Network::Symmetric(p) => p.q(),
        }
    }

    pub fn link(&self, tx: usize, rx: usize) -> u32 {
        match self {
            Network::General(p) => p.link(tx, rx),
            Network::Symmetric(p) => p.link(tx, rx),
        }
    }

    /// `G^(q - n_{tx,rx})`.
    pub fn transfer_block(&self, tx: usize, rx: usize) -> Gf2Matrix {
        let q = self.q() as usize;
        shift_matrix(q, q - self.link(tx, rx) as usize)
    }

    pub fn as_symmetric(&self) -> Option<NetworkParamsSym> {
        match self {
            Network::General(p) => p.as_symmetric(),
            Network::Symmetric(p) => Some(*p),
        }
    }
}

impl From<NetworkParams2x2> for Network {
    fn from(p: NetworkParams2x2) -> Self {
        Network::General(p)
    }
}

impl From<NetworkParamsSym> for Network {
    fn from(p: NetworkParamsSym) -> Self {
        Network::Symmetric(p)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Network::General(p) => write!(
                f,
                "(n11,n12,n21,n22)=({},{},{},{})",
                p.n11, p.n12, p.n21, p.n22
            ),
            Network::Symmetric(p) => write!(f, "(m,n,L)=({},{},{})", p.m, p.n, p.users),
        }
    }
}

/// Per-receiver transfer blocks and the stacked map
/// `(X_1, .., X_L) -> (Y_1, .., Y_L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelMatrix {
    users: usize,
    q: usize,
    /// `blocks[rx][tx]`
    blocks: Vec<Vec<Gf2Matrix>>,
    stacked: Gf2Matrix,
}

impl ChannelMatrix {
    pub fn users(&self) -> usize {
        self.users
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn block(&self, rx: usize, tx: usize) -> &Gf2Matrix {
        &self.blocks[rx][tx]
    }

    pub fn stacked(&self) -> &Gf2Matrix {
        &self.stacked
    }

    /// Receiver `rx`'s block row `[G^(q-n_{1,rx}) | .. | G^(q-n_{L,rx})]`.
    pub fn receiver_row(&self, rx: usize) -> Gf2Matrix {
        self.stacked.row_range(rx * self.q..(rx + 1) * self.q)
    }
}

pub fn transfer_matrices(network: &Network) -> ChannelMatrix {
    let users = network.users();
    let q = network.q() as usize;
    let blocks: Vec<Vec<Gf2Matrix>> = (0..users)
        .map(|rx| (0..users).map(|tx| network.transfer_block(tx, rx)).collect())
        .collect();
    let rows: Vec<Gf2Matrix> = blocks
        .iter()
        .map(|row| Gf2Matrix::hconcat(&row.iter().collect::<Vec<_>>()).expect("equal heights"))
        .collect();
    let stacked = if users * q == 0 {
        Gf2Matrix::zeros(0, 0)
    } else {
        Gf2Matrix::vconcat(&rows.iter().collect::<Vec<_>>()).expect("equal widths")
    };
    ChannelMatrix {
        users,
        q,
        blocks,
        stacked,
    }
}

/// Pushes one `q x N` input per transmitter (one column per channel use)
/// through the channel: `Y_rx = sum_tx block(rx, tx) X_tx`.
pub fn receive(ch: &ChannelMatrix, inputs: &[Gf2Matrix]) -> Result<Vec<Gf2Matrix>> {
    if inputs.len() != ch.users {
        return Err(mismatch("receive", (ch.users, ch.q), (inputs.len(), 0)));
    }
    let uses = inputs.first().map_or(0, Gf2Matrix::cols);
    for x in inputs {
        if x.rows() != ch.q || x.cols() != uses {
            return Err(mismatch("receive", (ch.q, uses), x.shape()));
        }
    }
    (0..ch.users)
        .map(|rx| {
            let mut y = Gf2Matrix::zeros(ch.q, uses);
            for (tx, x) in inputs.iter().enumerate() {
                y = y.add(&ch.blocks[rx][tx].mul(x)?)?;
            }
            Ok(y)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Degenerate,
    NonDegenerate,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Degenerate => "degenerate",
            Classification::NonDegenerate => "non-degenerate",
        })
    }
}

/// Degenerate iff `n11 - n12 = n21 - n22`.
pub fn classify_closed_form(p: &NetworkParams2x2) -> Classification {
    let lhs = i64::from(p.n11) - i64::from(p.n12);
    let rhs = i64::from(p.n21) - i64::from(p.n22);
    if lhs == rhs {
        Classification::Degenerate
    } else {
        Classification::NonDegenerate
    }
}

/// One-based `(i, j)`: the signal `G^(q-n_ij) X_i` is recoverable from
/// `(Y_1, Y_2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub transmitter: usize,
    pub receiver: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructiveClass {
    pub class: Classification,
    pub witness: Option<Witness>,
}

/// Decides degeneracy directly from the definition: for each `(i, j)` in
/// lexicographic order, checks whether the rows `G^(q-n_ij)` acting on `X_i`
/// lie in the row space of the stacked channel map. A signal that is
/// identically zero (`n_ij = 0`) carries nothing and is not counted.
pub fn classify_constructive(p: &NetworkParams2x2) -> ConstructiveClass {
    let network = Network::General(*p);
    let ch = transfer_matrices(&network);
    let q = p.q() as usize;
    for tx in 0..2 {
        for rx in 0..2 {
            if p.link(tx, rx) == 0 {
                continue;
            }
            let mut target = Gf2Matrix::zeros(q, 2 * q);
            let block = network.transfer_block(tx, rx);
            for r in 0..q {
                for c in block.ones_in_row(r) {
                    target.set(r, tx * q + c, true);
                }
            }
            if ch
                .stacked()
                .solve_left(&target)
                .expect("shapes agree")
                .is_some()
            {
                return ConstructiveClass {
                    class: Classification::NonDegenerate,
                    witness: Some(Witness {
                        transmitter: tx + 1,
                        receiver: rx + 1,
                    }),
                };
            }
        }
    }
    ConstructiveClass {
        class: Classification::Degenerate,
        witness: None,
    }
}

/// Checks that every `X_l` is a linear function of `(Y_1, .., Y_L)`.
///
/// Inputs are taken supported on the top `n` levels (the direct-link
/// levels), which is the convention under which the property holds for all
/// `m != n`; bits below level `n` never reach the own receiver.
pub fn claim1_check(p: &NetworkParamsSym) -> Result<bool> {
    if p.m() == p.n() {
        return Err(Error::Precondition(format!(
            "inputs are not recoverable when m = n = {}",
            p.n()
        )));
    }
    let users = p.users();
    let q = p.q() as usize;
    let support = p.n() as usize;
    let ch = transfer_matrices(&Network::Symmetric(*p));
    let keep: Vec<usize> = (0..users)
        .flat_map(|t| (0..support).map(move |k| t * q + k))
        .collect();
    let restricted = Gf2Matrix::from_fn(users * q, keep.len(), |r, c| ch.stacked().get(r, keep[c]));
    for l in 0..users {
        let target = Gf2Matrix::from_fn(support, keep.len(), |r, c| keep[c] == l * q + r);
        if restricted.solve_left(&target)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
