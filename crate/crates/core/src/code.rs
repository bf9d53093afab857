//! Explicit linear codes: beamforming matrices for every transmitter.
//!
//! A code over `N` channel uses stacks the uses slot-major: row `s * q + p`
//! of `V_l` is level `p + 1` of transmitter `l` in use `s + 1`. Column `i`
//! carries source bit `i` of that transmitter.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::decomposition::{full_decompose, validate_coloring, Decomposition, Node};
use crate::error::{Error, Result};
use crate::gf2::{shift_matrix, Gf2Matrix};
use crate::network::{classify_closed_form, Classification, Network, NetworkParams2x2, NetworkParamsSym};
use crate::Rate;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCode {
    #[serde(rename = "params")]
    pub network: Network,
    #[serde(rename = "N")]
    pub uses: usize,
    #[serde(rename = "K")]
    pub sources: usize,
    #[serde(rename = "V")]
    pub beamformers: Vec<Gf2Matrix>,
    pub label: String,
}

impl LinearCode {
    pub fn new(
        network: Network,
        uses: usize,
        sources: usize,
        beamformers: Vec<Gf2Matrix>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let code = Self {
            network,
            uses,
            sources,
            beamformers,
            label: label.into(),
        };
        code.check_shape()?;
        Ok(code)
    }

    pub fn check_shape(&self) -> Result<()> {
        let users = self.network.users();
        if self.beamformers.len() != users {
            return Err(Error::DimensionMismatch {
                op: "code",
                left: format!("{users} transmitters"),
                right: format!("{} beamforming matrices", self.beamformers.len()),
            });
        }
        if self.uses == 0 {
            return Err(Error::Precondition("a code needs at least one channel use".into()));
        }
        let want = (self.rows(), self.sources);
        for v in &self.beamformers {
            if v.shape() != want {
                return Err(crate::error::mismatch("code", want, v.shape()));
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.uses * self.network.q() as usize
    }

    pub fn rate(&self) -> Rate {
        Rate::new(self.sources as i64, self.uses as i64)
    }

    /// Whether every source bit is put on the air by every transmitter.
    pub fn columns_nonzero(&self) -> bool {
        self.beamformers
            .iter()
            .all(|v| (0..v.cols()).all(|c| !v.column_is_zero(c)))
    }

    /// The same code with transmitters 1 and 2 exchanged.
    pub fn swapped(mut self, network: Network) -> Self {
        self.beamformers.swap(0, 1);
        self.network = network;
        self
    }

    /// Block-diagonal repetition over `times` consecutive blocks of uses.
    pub fn repeat(&self, times: usize) -> Self {
        Self {
            network: self.network,
            uses: self.uses * times,
            sources: self.sources * times,
            beamformers: self
                .beamformers
                .iter()
                .map(|v| v.repeat_diagonal(times))
                .collect(),
            label: self.label.clone(),
        }
    }
}

impl fmt::Display for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} code on {}: K={} N={} rate={}",
            self.label,
            self.network,
            self.sources,
            self.uses,
            self.rate()
        )?;
        for (i, v) in self.beamformers.iter().enumerate() {
            writeln!(f, "V{}:", i + 1)?;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Which link carries more levels in a symmetric network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// `m < n`: the direct links are stronger.
    DirectStronger,
    /// `m > n`: the cross links are stronger.
    CrossStronger,
}

impl Orientation {
    pub fn of(m: u32, n: u32) -> Option<Self> {
        match m.cmp(&n) {
            std::cmp::Ordering::Less => Some(Self::DirectStronger),
            std::cmp::Ordering::Greater => Some(Self::CrossStronger),
            std::cmp::Ordering::Equal => None,
        }
    }
}

/// `rows x k` matrix with a single one in each listed `(row, column)`.
fn placement(rows: usize, k: usize, ones: impl IntoIterator<Item = (usize, usize)>) -> Gf2Matrix {
    let mut v = Gf2Matrix::zeros(rows, k);
    for (r, c) in ones {
        v.set(r, c, true);
    }
    v
}

fn sym(m: u32, n: u32, users: usize) -> Result<NetworkParamsSym> {
    NetworkParamsSym::new(m, n, users)
}

fn require_two_users(users: usize, scheme: &str) -> Result<()> {
    if users != 2 {
        return Err(Error::Precondition(format!("{scheme} is a two-user scheme, got L={users}")));
    }
    Ok(())
}

/// Every transmitter sends its bits on its top `n` levels; the channel forms
/// the sum by itself.
pub fn construct_uncoded(m: u32, n: u32, users: usize) -> Result<LinearCode> {
    if m != n {
        return Err(Error::Precondition(format!("uncoded transmission needs m = n, got ({m},{n})")));
    }
    let p = sym(m, n, users)?;
    let k = n as usize;
    let v = Gf2Matrix::identity(k);
    LinearCode::new(p.into(), 1, k, vec![v; users], "uncoded")
}

/// Rate `min n_ij` on a degenerate two-user network: both transmitters place
/// their bits so that they land on the same levels at the weaker receiver,
/// which makes them land together at the stronger receiver as well.
pub fn construct_degenerate(p: &NetworkParams2x2) -> Result<LinearCode> {
    if classify_closed_form(p) != Classification::Degenerate {
        return Err(Error::Precondition(format!(
            "network ({},{},{},{}) is not degenerate",
            p.n11, p.n12, p.n21, p.n22
        )));
    }
    let q = p.q() as usize;
    // Links from each transmitter into the weaker receiver.
    let (l1, l2) = if p.n11 >= p.n12 { (p.n12, p.n22) } else { (p.n11, p.n21) };
    let k = l1.min(l2) as usize;
    let v1 = placement(q, k, (0..k).map(|j| (j + l1 as usize - k, j)));
    let v2 = placement(q, k, (0..k).map(|j| (j + l2 as usize - k, j)));
    LinearCode::new(Network::General(*p), 1, k, vec![v1, v2], "degenerate")
}

/// Single-use scheme for `1/2 <= min/max <= 2/3`, rate `min(m, n)`.
///
/// For `m < n`, transmitter 1 sends `a_j` on level `j`. Transmitter 2 puts
/// the first `2m - n` bits `n - m` levels lower (aligned at receiver 2), the
/// following ones on the same level (vacant at both receivers), and the last
/// `2m - n` bits `n - m` levels higher (aligned at receiver 1).
pub fn construct_case1(m: u32, n: u32) -> Result<LinearCode> {
    let (lo, hi) = (m.min(n), m.max(n));
    if m == n || 2 * lo < hi || 3 * lo > 2 * hi {
        return Err(Error::Precondition(format!(
            "case I needs 1/2 <= min/max <= 2/3, got ({m},{n})"
        )));
    }
    let (lo, hi) = (lo as usize, hi as usize);
    let gap = hi - lo;
    let overlap = 2 * lo - hi;
    let v1 = placement(hi, lo, (0..lo).map(|j| (j, j)));
    let v2 = placement(
        hi,
        lo,
        (0..lo).map(|j| {
            let level = if j < overlap {
                j + gap
            } else if j < gap {
                j
            } else {
                j - gap
            };
            (level, j)
        }),
    );
    let code = LinearCode::new(sym(m, n, 2)?.into(), 1, lo, vec![v1, v2], "case1")?;
    Ok(mirror_if(code, m, n))
}

fn mirror_if(code: LinearCode, m: u32, n: u32) -> LinearCode {
    if m > n {
        let net = code.network;
        code.swapped(net)
    } else {
        code
    }
}

/// The closed-form `(V1, V2)` for `m < n`, `2/3 <= m/n < 1`:
/// `V_l = [V | P_l]` with `V = I_3 (x) [e_1 .. e_{n-m}]`,
/// `P_1 = e_3 (x) [e_{g+1} .. e_{2m-n}] + e_2 (x) ([e_{2g+1} .. e_m] + [e_{3g+1} .. e_n])`
/// and `P_2` the same with `e_1` in place of `e_2`, where `g = n - m`.
///
/// The rank condition only holds for `5m <= 4n`; beyond that `T^2 P_1`
/// collides with `P_1`. [`case2_matrices`] falls back to a lifted
/// construction there.
pub fn case2_closed_form(m: u32, n: u32) -> Result<(Gf2Matrix, Gf2Matrix)> {
    if m >= n || 3 * m < 2 * n {
        return Err(Error::Precondition(format!(
            "case II needs 2/3 <= m/n < 1, got ({m},{n})"
        )));
    }
    let (m, n) = (m as usize, n as usize);
    let gap = n - m;
    let e = |i: usize| Gf2Matrix::unit(n, i);
    let slot = |s: usize| Gf2Matrix::unit(3, s);

    let head = Gf2Matrix::from_fn(n, gap, |r, c| r == c);
    let v = head.repeat_diagonal(3);

    let tail_cols = 3 * m - 2 * n;
    // Column c: e_{g+1+c} in use 3 plus (e_{2g+1+c} + e_{3g+1+c}) in use s,
    // all one-based.
    let p = |s: usize| -> Gf2Matrix {
        let cols: Vec<Gf2Matrix> = (0..tail_cols)
            .map(|c| {
                let top = slot(2).kron(&e(gap + c));
                let pair = e(2 * gap + c).add(&e(3 * gap + c)).expect("same length");
                top.add(&slot(s).kron(&pair)).expect("same length")
            })
            .collect();
        if cols.is_empty() {
            Gf2Matrix::zeros(3 * n, 0)
        } else {
            Gf2Matrix::hconcat(&cols.iter().collect::<Vec<_>>()).expect("equal heights")
        }
    };
    let v1 = Gf2Matrix::hconcat(&[&v, &p(1)])?;
    let v2 = Gf2Matrix::hconcat(&[&v, &p(0)])?;
    Ok((v1, v2))
}

/// `(V1, V2)` for the gap-1 network `(r, r+1)`, `r >= 2`: paired blocks of
/// three levels on top (`V1 = V2 = e_{3k+1}` in every use), and the closed
/// form for `(3,4)` or `(4,5)` on the bottom levels when `3` does not
/// divide `r + 1`.
fn gap1_case2_matrices(r: usize) -> Result<(Gf2Matrix, Gf2Matrix)> {
    let q = r + 1;
    let tail = match q % 3 {
        0 => 0,
        1 => 4,
        _ => 5,
    };
    let blocks = (q - tail) / 3;
    let top = placement(q, blocks, (0..blocks).map(|b| (3 * b, b))).repeat_diagonal(3);
    if tail == 0 {
        return Ok((top.clone(), top));
    }
    let (b1, b2) = case2_closed_form(tail as u32 - 1, tail as u32)?;
    let offset = 3 * blocks;
    let v1 = Gf2Matrix::hconcat(&[&top, &embed_levels(&b1, 3, tail, q, offset)])?;
    let v2 = Gf2Matrix::hconcat(&[&top, &embed_levels(&b2, 3, tail, q, offset)])?;
    Ok((v1, v2))
}

/// `(V1, V2)` of the three-use alternating-alignment scheme for `m < n`,
/// `2/3 <= m/n < 1`, each `3n x n`, such that
/// `[V1, T V2, T^2 V1]` and `[V2, T V1, T^2 V2]` have full rank with
/// `T = I_3 (x) G^{n-m}`.
///
/// Uses [`case2_closed_form`] when `5m <= 4n`. Otherwise levels are split
/// into `n - m` classes by residue mod `n - m`; `T` acts as a single shift
/// inside each class, so gap-1 blocks built per class and lifted back
/// satisfy the same condition.
pub fn case2_matrices(m: u32, n: u32) -> Result<(Gf2Matrix, Gf2Matrix)> {
    if m >= n || 3 * m < 2 * n || 5 * m <= 4 * n {
        return case2_closed_form(m, n);
    }
    let (m, n) = (m as usize, n as usize);
    let gap = n - m;
    let mut parts1 = Vec::with_capacity(gap);
    let mut parts2 = Vec::with_capacity(gap);
    for class in 0..gap {
        let levels = (n - class).div_ceil(gap);
        let (c1, c2) = gap1_case2_matrices(levels - 1)?;
        let lift = |v: &Gf2Matrix| {
            let mut out = Gf2Matrix::zeros(3 * n, v.cols());
            for s in 0..3 {
                for j in 0..levels {
                    for c in v.ones_in_row(s * levels + j) {
                        out.set(s * n + class + j * gap, c, true);
                    }
                }
            }
            out
        };
        parts1.push(lift(&c1));
        parts2.push(lift(&c2));
    }
    let v1 = Gf2Matrix::hconcat(&parts1.iter().collect::<Vec<_>>())?;
    let v2 = Gf2Matrix::hconcat(&parts2.iter().collect::<Vec<_>>())?;
    Ok((v1, v2))
}

/// `I_3 (x) G^gap`, the three-use cross-link transfer.
pub(crate) fn three_use_shift(q: usize, gap: usize) -> Gf2Matrix {
    shift_matrix(q, gap).repeat_diagonal(3)
}

/// Three-use scheme for `2/3 <= min/max < 1`, rate `2 max(m, n) / 3`.
/// Transmitter 1 sends `[V1 | T V2]`, transmitter 2 sends `[T V1 | V2]`
/// (roles exchanged when `m > n`).
pub fn construct_case2(m: u32, n: u32) -> Result<LinearCode> {
    let (lo, hi) = (m.min(n), m.max(n));
    let (v1, v2) = case2_matrices(lo, hi)?;
    let t = three_use_shift(hi as usize, (hi - lo) as usize);
    let tx1 = Gf2Matrix::hconcat(&[&v1, &t.mul(&v2)?])?;
    let tx2 = Gf2Matrix::hconcat(&[&t.mul(&v1)?, &v2])?;
    let code = LinearCode::new(sym(m, n, 2)?.into(), 3, 2 * hi as usize, vec![tx1, tx2], "case2")?;
    Ok(mirror_if(code, m, n))
}

/// Paired-level pattern for gap-1 networks: in each block of three levels,
/// transmitter 1 sends `(a_{2k-1}, a_{2k}, 0)` and transmitter 2 sends
/// `(b_{2k}, b_{2k-1}, 0)`. Returns one-use beamformers covering `blocks`
/// blocks, embedded in `q` levels from the top.
fn paired_blocks(q: usize, blocks: usize) -> (Gf2Matrix, Gf2Matrix) {
    let k = 2 * blocks;
    let v1 = placement(q, k, (0..blocks).flat_map(|b| [(3 * b, 2 * b), (3 * b + 1, 2 * b + 1)]));
    let v2 = placement(q, k, (0..blocks).flat_map(|b| [(3 * b, 2 * b + 1), (3 * b + 1, 2 * b)]));
    (v1, v2)
}

/// Copies the rows of a `uses * src_q`-row matrix into rows
/// `offset..offset + src_q` of each use of a `dst_q`-level layout.
fn embed_levels(v: &Gf2Matrix, uses: usize, src_q: usize, dst_q: usize, offset: usize) -> Gf2Matrix {
    let mut out = Gf2Matrix::zeros(uses * dst_q, v.cols());
    for s in 0..uses {
        for p in 0..src_q {
            for c in v.ones_in_row(s * src_q + p) {
                out.set(s * dst_q + offset + p, c, true);
            }
        }
    }
    out
}

/// Two-user code for the gap-1 network `(r, r+1)` (or `(r+1, r)` with
/// [`Orientation::CrossStronger`]); rate 0 for `r = 0`, 1 for `r = 1`, and
/// `2(r+1)/3` otherwise.
pub fn construct_gap1_l2(r: u32, orientation: Orientation) -> Result<LinearCode> {
    let (m, n) = match orientation {
        Orientation::DirectStronger => (r, r + 1),
        Orientation::CrossStronger => (r + 1, r),
    };
    let net: Network = sym(m, n, 2)?.into();
    let q = (r + 1) as usize;
    let r_us = r as usize;
    let code = match r_us {
        0 => LinearCode::new(net, 1, 0, vec![Gf2Matrix::zeros(1, 0); 2], "gap1")?,
        1 => {
            let v = placement(2, 1, [(0, 0)]);
            LinearCode::new(net, 1, 1, vec![v.clone(), v], "gap1")?
        }
        _ if r_us % 3 == 2 => {
            let (v1, v2) = paired_blocks(q, q / 3);
            let code = LinearCode::new(sym(r, r + 1, 2)?.into(), 1, v1.cols(), vec![v1, v2], "gap1")?;
            mirror_if(code, m, n)
        }
        _ => {
            // Paired blocks on top in every use, a (3,4) or (4,5) three-use
            // block on the bottom levels.
            let tail = if r_us.is_multiple_of(3) { 3 } else { 4 };
            let top_blocks = (r_us - tail) / 3;
            let offset = 3 * top_blocks;
            let (t1, t2) = paired_blocks(q, top_blocks);
            let (t1, t2) = (t1.repeat_diagonal(3), t2.repeat_diagonal(3));
            let bottom = construct_case2(tail as u32, tail as u32 + 1)?;
            let b: Vec<Gf2Matrix> = bottom
                .beamformers
                .iter()
                .map(|v| embed_levels(v, 3, tail + 1, q, offset))
                .collect();
            let v1 = Gf2Matrix::hconcat(&[&t1, &b[0]])?;
            let v2 = Gf2Matrix::hconcat(&[&t2, &b[1]])?;
            let code = LinearCode::new(sym(r, r + 1, 2)?.into(), 3, v1.cols(), vec![v1, v2], "gap1")?;
            mirror_if(code, m, n)
        }
    };
    Ok(LinearCode { network: net, ..code })
}

/// Code for the gap-1 network with `L >= 3` users and `r = max(m, n)`
/// levels, all transmitters using the same beamformers. Rate 0 for `r = 1`
/// and `r / 2` otherwise.
///
/// For `r = 2k` source `j` sits on level `2j - 1`. For `r = 2k + 1` two uses
/// are needed: in use 1 sources `1..k` sit on the odd levels and source
/// `k + 1` on level `2k`; in use 2 source `k + 1` is sent again on level 1
/// and sources `k + 2..2k + 1` sit on the even levels.
pub fn construct_luser_gap1(r: u32, orientation: Orientation, users: usize) -> Result<LinearCode> {
    if users < 3 {
        return Err(Error::Precondition(format!(
            "the L-user gap-1 scheme needs L >= 3, got {users}"
        )));
    }
    if r == 0 {
        return Err(Error::Precondition("gap-1 networks have r >= 1".into()));
    }
    let (m, n) = match orientation {
        Orientation::DirectStronger => (r - 1, r),
        Orientation::CrossStronger => (r, r - 1),
    };
    let net: Network = sym(m, n, users)?.into();
    let q = r as usize;
    let k = q / 2;
    let (uses, v) = if q == 1 {
        (1, Gf2Matrix::zeros(1, 0))
    } else if q.is_multiple_of(2) {
        (1, placement(q, k, (0..k).map(|j| (2 * j, j))))
    } else {
        let ones = (0..k)
            .map(|j| (2 * j, j))
            .chain([(2 * k - 1, k), (q, k)])
            .chain((0..k).map(|j| (q + 2 * j + 1, k + 1 + j)));
        (2, placement(2 * q, q, ones))
    };
    LinearCode::new(net, uses, v.cols(), vec![v; users], "luser-gap1")
}

/// Lifts one code per color through the decomposition's coloring and stacks
/// them, after repeating each to the least common multiple of their use
/// counts.
pub fn compose_from_decomposition(
    params: &NetworkParamsSym,
    dec: &Decomposition,
    subcodes: &[LinearCode],
) -> Result<LinearCode> {
    if !validate_coloring(params, dec) {
        return Err(Error::InvalidColoring(format!(
            "decomposition {dec} does not fit (m,n,L)=({},{},{})",
            params.m(),
            params.n(),
            params.users()
        )));
    }
    let comps = dec.components();
    if subcodes.len() != comps.len() {
        return Err(Error::Precondition(format!(
            "{} sub-codes for {} colors",
            subcodes.len(),
            comps.len()
        )));
    }
    let users = params.users();
    for (c, (code, &(sm, sn))) in subcodes.iter().zip(comps).enumerate() {
        let want = Network::Symmetric(sym(sm, sn, users)?);
        if code.network != want {
            return Err(Error::Precondition(format!(
                "sub-code {c} is for {}, color {c} is {want}",
                code.network
            )));
        }
    }
    let uses = subcodes.iter().fold(1, |acc, c| acc.lcm(&c.uses));
    let q = params.q() as usize;
    let coloring = dec.coloring();
    let mut per_tx: Vec<Vec<Gf2Matrix>> = vec![Vec::new(); users];
    for (color, code) in subcodes.iter().enumerate() {
        let rep = code.repeat(uses / code.uses);
        let sq = code.network.q() as usize;
        for (tx, v) in rep.beamformers.iter().enumerate() {
            let mut lifted = Gf2Matrix::zeros(uses * q, v.cols());
            for s in 0..uses {
                for sub in 0..sq {
                    let level = coloring
                        .level_of(Node::Transmitter(tx), color, sub)
                        .ok_or_else(|| Error::InvalidColoring(format!("color {color} has no level {sub}")))?;
                    for c in v.ones_in_row(s * sq + sub) {
                        lifted.set(s * q + level, c, true);
                    }
                }
            }
            per_tx[tx].push(lifted);
        }
    }
    let beamformers = per_tx
        .into_iter()
        .map(|parts| {
            if parts.is_empty() {
                Ok(Gf2Matrix::zeros(uses * q, 0))
            } else {
                Gf2Matrix::hconcat(&parts.iter().collect::<Vec<_>>())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let k = beamformers[0].cols();
    LinearCode::new((*params).into(), uses, k, beamformers, "composed")
}

/// Gap-1 code for one sub-network of a decomposition.
fn gap1_code(m: u32, n: u32, users: usize) -> Result<LinearCode> {
    let orientation = Orientation::of(m, n)
        .ok_or_else(|| Error::Precondition(format!("({m},{n}) is not a gap-1 network")))?;
    if m.abs_diff(n) != 1 {
        return Err(Error::Precondition(format!("({m},{n}) is not a gap-1 network")));
    }
    if users == 2 {
        construct_gap1_l2(m.min(n), orientation)
    } else {
        construct_luser_gap1(m.max(n), orientation, users)
    }
}

/// Decomposes into gap-1 sub-networks and composes their codes.
pub fn construct_composed(m: u32, n: u32, users: usize) -> Result<LinearCode> {
    let params = sym(m, n, users)?;
    let dec = full_decompose(m, n, users)?;
    let subcodes = dec
        .components()
        .iter()
        .map(|&(sm, sn)| gap1_code(sm, sn, users))
        .collect::<Result<Vec<_>>>()?;
    compose_from_decomposition(&params, &dec, &subcodes)
}

/// Capacity-achieving code for a symmetric network (linear-capacity-achieving
/// for `L >= 3`).
pub fn construct_auto(m: u32, n: u32, users: usize) -> Result<LinearCode> {
    if m == n {
        return construct_uncoded(m, n, users);
    }
    if users >= 3 {
        return construct_composed(m, n, users);
    }
    let (lo, hi) = (m.min(n), m.max(n));
    if 2 * lo <= hi {
        construct_composed(m, n, users)
    } else if 3 * lo <= 2 * hi {
        construct_case1(m, n)
    } else {
        construct_case2(m, n)
    }
}

/// Code for a general two-user network where one is known.
pub fn construct_auto_2x2(p: &NetworkParams2x2) -> Result<LinearCode> {
    if classify_closed_form(p) == Classification::Degenerate {
        return construct_degenerate(p);
    }
    match p.as_symmetric() {
        Some(s) => construct_auto(s.m(), s.n(), 2),
        None => Err(Error::Precondition(format!(
            "capacity unknown for non-degenerate, non-symmetric network ({},{},{},{})",
            p.n11, p.n12, p.n21, p.n22
        ))),
    }
}

/// Two-user schemes by name, for callers that pick one explicitly.
pub fn construct_named(scheme: &str, m: u32, n: u32, users: usize) -> Result<LinearCode> {
    match scheme {
        "auto" => construct_auto(m, n, users),
        "uncoded" => construct_uncoded(m, n, users),
        "case1" => {
            require_two_users(users, "case1")?;
            construct_case1(m, n)
        }
        "case2" => {
            require_two_users(users, "case2")?;
            construct_case2(m, n)
        }
        "gap1" => {
            require_two_users(users, "gap1")?;
            gap1_code(m, n, 2)
        }
        "luser" => {
            if users < 3 {
                return Err(Error::Precondition("luser needs L >= 3".into()));
            }
            gap1_code(m, n, users)
        }
        "compose" => construct_composed(m, n, users),
        other => Err(Error::Precondition(format!("unknown scheme {other:?}"))),
    }
}
