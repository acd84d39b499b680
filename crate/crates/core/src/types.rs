use std::fmt;
use std::io;

use serde::{Deserialize, Serialize};

use crate::angle::AnalyzerAngle;
use crate::error::{Error, Result};

/// Normalization tolerance for probability tables.
pub const NORM_TOL: f64 = 1e-12;

/// Directions closer than this are treated as the same analyzer setting.
pub const ANGLE_TOL: f64 = 1e-12;

/// Trinary measurement result of one photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    /// Photon passed the polarizer and was detected (+1).
    Pass,
    /// Photon was blocked and detected in the orthogonal port (−1).
    Block,
    /// No detection (0).
    Undetected,
}

impl Outcome {
    pub const ALL: [Outcome; 3] = [Outcome::Pass, Outcome::Block, Outcome::Undetected];

    /// Position in 3×3 tables: `+1 → 0`, `−1 → 1`, `0 → 2`.
    #[inline]
    pub const fn index(self) -> usize {
        match self {
            Outcome::Pass => 0,
            Outcome::Block => 1,
            Outcome::Undetected => 2,
        }
    }

    #[inline]
    pub const fn value(self) -> i8 {
        match self {
            Outcome::Pass => 1,
            Outcome::Block => -1,
            Outcome::Undetected => 0,
        }
    }

    pub fn from_value(v: i8) -> Option<Outcome> {
        match v {
            1 => Some(Outcome::Pass),
            -1 => Some(Outcome::Block),
            0 => Some(Outcome::Undetected),
            _ => None,
        }
    }

    pub fn is_detected(self) -> bool {
        self != Outcome::Undetected
    }
}

/// A detected result, `r` or `q ∈ {+1, −1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl From<Sign> for Outcome {
    fn from(s: Sign) -> Outcome {
        match s {
            Sign::Plus => Outcome::Pass,
            Sign::Minus => Outcome::Block,
        }
    }
}

impl TryFrom<Outcome> for Sign {
    type Error = Error;

    fn try_from(o: Outcome) -> Result<Sign> {
        match o {
            Outcome::Pass => Ok(Sign::Plus),
            Outcome::Block => Ok(Sign::Minus),
            Outcome::Undetected => Err(Error::UndetectedOutcome),
        }
    }
}

/// Single-photon outcome probabilities `(p₊, p₋, p₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbTriple {
    pub plus: f64,
    pub minus: f64,
    pub zero: f64,
}

impl ProbTriple {
    pub fn new(plus: f64, minus: f64, zero: f64) -> Result<Self> {
        let ok = [plus, minus, zero]
            .iter()
            .all(|p| (-NORM_TOL..=1.0 + NORM_TOL).contains(p));
        if !ok || (plus + minus + zero - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(plus, minus, zero));
        }
        Ok(ProbTriple { plus, minus, zero })
    }

    /// Detected mass `detection` split as `p₊ = detection·pass`, `p₋ = detection·(1 − pass)`.
    pub fn with_detection(pass: f64, detection: f64) -> Self {
        let plus = detection * pass;
        let minus = detection - plus;
        ProbTriple {
            plus,
            minus,
            zero: 1.0 - detection,
        }
    }

    pub const fn certain(outcome: Outcome) -> Self {
        match outcome {
            Outcome::Pass => ProbTriple {
                plus: 1.0,
                minus: 0.0,
                zero: 0.0,
            },
            Outcome::Block => ProbTriple {
                plus: 0.0,
                minus: 1.0,
                zero: 0.0,
            },
            Outcome::Undetected => ProbTriple {
                plus: 0.0,
                minus: 0.0,
                zero: 1.0,
            },
        }
    }

    #[inline]
    pub fn get(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Pass => self.plus,
            Outcome::Block => self.minus,
            Outcome::Undetected => self.zero,
        }
    }

    #[inline]
    pub fn sign(&self, s: Sign) -> f64 {
        self.get(s.into())
    }

    /// Detection mass `α = p₊ + p₋`.
    #[inline]
    pub fn detection(&self) -> f64 {
        self.plus + self.minus
    }

    /// Mean outcome `p₊ − p₋`.
    #[inline]
    pub fn expectation(&self) -> f64 {
        self.plus - self.minus
    }

    pub fn is_normalized(&self) -> bool {
        ProbTriple::new(self.plus, self.minus, self.zero).is_ok()
    }

    /// Maps a uniform draw in `[0, 1)` to an outcome.
    #[inline]
    pub fn sample(&self, u: f64) -> Outcome {
        if u < self.plus {
            Outcome::Pass
        } else if u < self.plus + self.minus {
            Outcome::Block
        } else {
            Outcome::Undetected
        }
    }
}

/// Analyzer directions on wing 1 and wing 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SettingPair {
    pub a: AnalyzerAngle,
    pub b: AnalyzerAngle,
}

impl SettingPair {
    pub fn new(a: AnalyzerAngle, b: AnalyzerAngle) -> Self {
        SettingPair { a, b }
    }

    pub fn matches(&self, other: &SettingPair) -> bool {
        self.a.approx_eq(other.a, ANGLE_TOL) && self.b.approx_eq(other.b, ANGLE_TOL)
    }
}

impl fmt::Display for SettingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// 3×3 joint outcome probabilities for one setting pair, indexed by [`Outcome::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointTable {
    pub cells: [[f64; 3]; 3],
}

impl JointTable {
    pub fn new(cells: [[f64; 3]; 3]) -> Result<Self> {
        let table = JointTable { cells };
        if !table.is_normalized() {
            let total = table.total();
            return Err(Error::NotNormalized(total, 0.0, 0.0));
        }
        Ok(table)
    }

    #[inline]
    pub fn get(&self, r: Outcome, q: Outcome) -> f64 {
        self.cells[r.index()][q.index()]
    }

    #[inline]
    pub fn signed(&self, r: Sign, q: Sign) -> f64 {
        self.get(r.into(), q.into())
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().flatten().sum()
    }

    /// Probability that both photons are detected.
    pub fn detected_mass(&self) -> f64 {
        self.cells[..2].iter().map(|row| row[0] + row[1]).sum()
    }

    pub fn wing1_marginal(&self) -> ProbTriple {
        let m = |r: usize| self.cells[r].iter().sum::<f64>();
        ProbTriple {
            plus: m(0),
            minus: m(1),
            zero: m(2),
        }
    }

    pub fn wing2_marginal(&self) -> ProbTriple {
        let m = |q: usize| self.cells.iter().map(|row| row[q]).sum::<f64>();
        ProbTriple {
            plus: m(0),
            minus: m(1),
            zero: m(2),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.cells
            .iter()
            .flatten()
            .all(|p| (-NORM_TOL..=1.0 + NORM_TOL).contains(p))
            && (self.total() - 1.0).abs() <= NORM_TOL
    }
}

/// Joint tables for a collection of setting pairs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    entries: Vec<(SettingPair, JointTable)>,
}

impl JointDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, pair: SettingPair, table: JointTable) {
        match self.entries.iter_mut().find(|(p, _)| p.matches(&pair)) {
            Some(slot) => slot.1 = table,
            None => self.entries.push((pair, table)),
        }
    }

    pub fn get(&self, pair: SettingPair) -> Result<&JointTable> {
        self.entries
            .iter()
            .find(|(p, _)| p.matches(&pair))
            .map(|(_, t)| t)
            .ok_or(Error::MissingPair { a: pair.a, b: pair.b })
    }

    pub fn lookup(&self, a: AnalyzerAngle, b: AnalyzerAngle) -> Result<&JointTable> {
        self.get(SettingPair::new(a, b))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(SettingPair, JointTable)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl FromIterator<(SettingPair, JointTable)> for JointDistribution {
    fn from_iter<I: IntoIterator<Item = (SettingPair, JointTable)>>(iter: I) -> Self {
        let mut dist = JointDistribution::new();
        for (pair, table) in iter {
            dist.insert(pair, table);
        }
        dist
    }
}

/// Event counts for one setting pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub pair: SettingPair,
    pub cells: [[u64; 3]; 3],
    pub n_emitted: u64,
}

impl Eq for SettingPair {}

impl PairCounts {
    pub fn empty(pair: SettingPair) -> Self {
        PairCounts {
            pair,
            cells: [[0; 3]; 3],
            n_emitted: 0,
        }
    }

    #[inline]
    pub fn get(&self, r: Outcome, q: Outcome) -> u64 {
        self.cells[r.index()][q.index()]
    }

    #[inline]
    pub fn signed(&self, r: Sign, q: Sign) -> u64 {
        self.get(r.into(), q.into())
    }

    pub fn cell_sum(&self) -> u64 {
        self.cells.iter().flatten().sum()
    }

    pub fn coincidences(&self) -> u64 {
        self.cells[..2].iter().map(|row| row[0] + row[1]).sum()
    }

    /// Events where wing 1 (resp. wing 2) registered a photon.
    pub fn detected_on_wing(&self, wing: u8) -> u64 {
        match wing {
            1 => self.cells[..2].iter().flatten().sum(),
            _ => self.cells.iter().map(|row| row[0] + row[1]).sum(),
        }
    }
}

/// Event counts for every setting pair of an experiment, in configuration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsTable {
    pub entries: Vec<PairCounts>,
}

impl CountsTable {
    pub fn new(entries: Vec<PairCounts>) -> Self {
        CountsTable { entries }
    }

    pub fn get(&self, pair: SettingPair) -> Result<&PairCounts> {
        self.entries
            .iter()
            .find(|c| c.pair.matches(&pair))
            .ok_or(Error::MissingPair { a: pair.a, b: pair.b })
    }

    pub fn lookup(&self, a: AnalyzerAngle, b: AnalyzerAngle) -> Result<&PairCounts> {
        self.get(SettingPair::new(a, b))
    }

    /// Cell sums equal the emitted count for every pair.
    pub fn is_conserved(&self) -> bool {
        self.entries.iter().all(|c| c.cell_sum() == c.n_emitted)
    }

    /// Writes the counts as CSV with columns
    /// `pair_index,a_rad,b_rad,r,q,count,n_emitted`, nine rows per pair.
    pub fn write_csv<W: io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record(["pair_index", "a_rad", "b_rad", "r", "q", "count", "n_emitted"])?;
        for (idx, c) in self.entries.iter().enumerate() {
            for r in Outcome::ALL {
                for q in Outcome::ALL {
                    out.write_record([
                        idx.to_string(),
                        c.pair.a.radians().to_string(),
                        c.pair.b.radians().to_string(),
                        r.value().to_string(),
                        q.value().to_string(),
                        c.get(r, q).to_string(),
                        c.n_emitted.to_string(),
                    ])?;
                }
            }
        }
        out.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }

    /// Reads the format produced by [`CountsTable::write_csv`]. Lines starting
    /// with `#` are skipped.
    pub fn read_csv<R: io::Read>(r: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            pair_index: usize,
            a_rad: f64,
            b_rad: f64,
            r: i8,
            q: i8,
            count: u64,
            n_emitted: u64,
        }
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
        let mut entries: Vec<PairCounts> = Vec::new();
        for row in reader.deserialize() {
            let row: Row = row?;
            let (r, q) = match (Outcome::from_value(row.r), Outcome::from_value(row.q)) {
                (Some(r), Some(q)) => (r, q),
                _ => return Err(Error::Csv(format!("bad outcome pair ({}, {})", row.r, row.q))),
            };
            if row.pair_index == entries.len() {
                let pair = SettingPair::new(row.a_rad.into(), row.b_rad.into());
                entries.push(PairCounts {
                    n_emitted: row.n_emitted,
                    ..PairCounts::empty(pair)
                });
            } else if row.pair_index + 1 != entries.len() {
                return Err(Error::Csv(format!("pair_index {} out of order", row.pair_index)));
            }
            entries[row.pair_index].cells[r.index()][q.index()] = row.count;
        }
        Ok(CountsTable { entries })
    }
}


/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    /// True when `value ≤ bound + k·stderr`.
    pub fn at_most(&self, bound: f64, k: f64) -> bool {
        self.value <= bound + k * self.stderr
    }

    /// True when `value ≥ bound − k·stderr`.
    pub fn at_least(&self, bound: f64, k: f64) -> bool {
        self.value >= bound - k * self.stderr
    }
}
