//! NC-OFDM transmit model: subcarrier maps, symbol grids, the half-repetitive
//! Schmidl&Cox preamble and frame assembly.
//!
//! Subcarrier indices are the signed physical indices `k ∈ [-N/2, N/2-1]`.
//! Dense symbol columns are stored in natural order, position `k + N/2`;
//! the IDFT bin of subcarrier `k` is `k mod N`.
//!
//! Time signals carry an `origin`: the buffer position of the first post-CP
//! sample of the preamble. Everything downstream uses that convention, so
//! "sample `n`" always means buffer position `origin + n`.

mod qpsk;

pub use qpsk::{demap_qpsk, map_qpsk, symbol as qpsk_symbol};

use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};

/// Set of occupied subcarriers inside an `n_fft`-bin spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcarrierMap {
    n_fft: usize,
    occupied: Vec<i32>,
}

impl SubcarrierMap {
    /// `n_fft` must be a positive multiple of 4 (the quarter-lag correlator
    /// needs `N/4` to be integral). Indices are sorted; duplicates and
    /// out-of-band indices are rejected.
    pub fn new(n_fft: usize, occupied: impl IntoIterator<Item = i32>) -> Result<Self> {
        if n_fft < 4 || !n_fft.is_multiple_of(4) {
            return Err(invalid(format!(
                "n_fft must be a positive multiple of 4, got {n_fft}"
            )));
        }
        let half = (n_fft / 2) as i32;
        let mut occupied: Vec<i32> = occupied.into_iter().collect();
        occupied.sort_unstable();
        if let Some(&k) = occupied.iter().find(|&&k| k < -half || k >= half) {
            return Err(invalid(format!(
                "subcarrier {k} outside [{}, {}]",
                -half,
                half - 1
            )));
        }
        if let Some(w) = occupied.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("subcarrier {} listed twice", w[0])));
        }
        if occupied.is_empty() {
            return Err(invalid("subcarrier map is empty"));
        }
        Ok(Self { n_fft, occupied })
    }

    /// Parses a comma-separated list of indices and inclusive ranges,
    /// e.g. `"-100..-1, 1..3, 46..100"`.
    pub fn parse(n_fft: usize, text: &str) -> Result<Self> {
        let mut indices = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || invalid(format!("cannot parse subcarrier range '{part}'"));
            // a leading '-' belongs to the first number, so split on the first ".." after index 0
            match part[1..].find("..").map(|i| i + 1) {
                Some(sep) => {
                    let lo: i32 = part[..sep].trim().parse().map_err(|_| bad())?;
                    let hi: i32 = part[sep + 2..].trim().parse().map_err(|_| bad())?;
                    if hi < lo {
                        return Err(bad());
                    }
                    indices.extend(lo..=hi);
                }
                None => indices.push(part.parse().map_err(|_| bad())?),
            }
        }
        Self::new(n_fft, indices)
    }

    /// The 256-bin allocation `{-100..-1, 1..3, 46..100}`: 158 subcarriers
    /// with a 42-subcarrier notch at bins 4..=45 around a licensed user.
    pub fn notched_256() -> Self {
        Self::parse(256, "-100..-1, 1..3, 46..100").expect("static map")
    }

    /// `span` minus DC and every subcarrier `k` with `|k - center| < width / 2`.
    /// With `center = 24.5` and `width = 42` this cuts exactly `4..=45`.
    pub fn with_notch(
        n_fft: usize,
        span: std::ops::RangeInclusive<i32>,
        center: f64,
        width: u32,
    ) -> Result<Self> {
        let half_width = f64::from(width) / 2.0;
        Self::new(
            n_fft,
            span.filter(|&k| k != 0 && (f64::from(k) - center).abs() >= half_width),
        )
    }

    pub fn n_fft(&self) -> usize {
        self.n_fft
    }

    pub fn occupied(&self) -> &[i32] {
        &self.occupied
    }

    /// Number of occupied subcarriers (α).
    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    pub fn contains(&self, k: i32) -> bool {
        self.occupied.binary_search(&k).is_ok()
    }

    /// Occupied subcarriers with an even physical index.
    pub fn even(&self) -> impl Iterator<Item = i32> + '_ {
        self.occupied.iter().copied().filter(|k| k % 2 == 0)
    }

    /// Position of subcarrier `k` inside a natural-order column.
    #[inline]
    pub fn position(&self, k: i32) -> usize {
        (k + (self.n_fft / 2) as i32) as usize
    }

    /// Subcarrier index of a natural-order column position.
    #[inline]
    pub fn index_at(&self, position: usize) -> i32 {
        position as i32 - (self.n_fft / 2) as i32
    }

    /// DFT bin of subcarrier `k` (`k mod N`).
    #[inline]
    pub fn bin(&self, k: i32) -> usize {
        k.rem_euclid(self.n_fft as i32) as usize
    }
}

/// Frame layout: map, cyclic prefix, symbols per frame (preamble included)
/// and the number of all-zero symbol slots ahead of the frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameSpec {
    pub map: SubcarrierMap,
    pub n_cp: usize,
    pub n_symbols: usize,
    pub n_empty_prefix: usize,
}

impl FrameSpec {
    pub fn new(
        map: SubcarrierMap,
        n_cp: usize,
        n_symbols: usize,
        n_empty_prefix: usize,
    ) -> Result<Self> {
        if n_cp > map.n_fft() {
            return Err(invalid(format!(
                "cyclic prefix {n_cp} longer than symbol {}",
                map.n_fft()
            )));
        }
        if n_symbols == 0 {
            return Err(invalid("a frame needs at least the preamble symbol"));
        }
        Ok(Self {
            map,
            n_cp,
            n_symbols,
            n_empty_prefix,
        })
    }

    /// N = 256, N_CP = 32, P = 11 and three empty slots over [`SubcarrierMap::notched_256`].
    pub fn reference() -> Self {
        Self::new(SubcarrierMap::notched_256(), 32, 11, 3).expect("static frame")
    }

    pub fn n_fft(&self) -> usize {
        self.map.n_fft()
    }

    /// Samples per symbol including the cyclic prefix.
    pub fn symbol_len(&self) -> usize {
        self.n_fft() + self.n_cp
    }

    pub fn frame_len(&self) -> usize {
        (self.n_empty_prefix + self.n_symbols) * self.symbol_len()
    }

    /// Buffer position of sample n = 0 (first post-CP preamble sample).
    pub fn origin(&self) -> usize {
        self.n_empty_prefix * self.symbol_len() + self.n_cp
    }

    /// Buffer positions carrying frame symbols (the empty prefix excluded).
    pub fn active_range(&self) -> Range<usize> {
        self.n_empty_prefix * self.symbol_len()..self.frame_len()
    }
}

/// Frequency-domain content of a frame: one natural-order column of `N`
/// values per symbol, zero outside the map.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    columns: Vec<Vec<Complex64>>,
}

impl SymbolGrid {
    pub fn new(map: &SubcarrierMap, columns: Vec<Vec<Complex64>>) -> Result<Self> {
        for (p, column) in columns.iter().enumerate() {
            if column.len() != map.n_fft() {
                return Err(invalid(format!(
                    "column {p} has {} entries, expected {}",
                    column.len(),
                    map.n_fft()
                )));
            }
            if let Some(pos) = column
                .iter()
                .enumerate()
                .position(|(i, d)| *d != Complex64::default() && !map.contains(map.index_at(i)))
            {
                return Err(invalid(format!(
                    "column {p} modulates unoccupied subcarrier {}",
                    map.index_at(pos)
                )));
            }
        }
        Ok(Self { columns })
    }

    pub fn columns(&self) -> &[Vec<Complex64>] {
        &self.columns
    }

    pub fn n_symbols(&self) -> usize {
        self.columns.len()
    }
}

/// Complex baseband samples plus the buffer position of sample n = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSignal {
    pub samples: Vec<Complex64>,
    pub origin: isize,
}

impl TimeSignal {
    pub fn new(samples: Vec<Complex64>, origin: isize) -> Self {
        Self { samples, origin }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Smallest valid sample index n.
    pub fn first_index(&self) -> isize {
        -self.origin
    }

    /// One past the largest valid sample index n.
    pub fn end_index(&self) -> isize {
        self.samples.len() as isize - self.origin
    }

    /// Sample at index n, `None` outside the buffer.
    pub fn at(&self, n: isize) -> Option<Complex64> {
        let pos = n + self.origin;
        (pos >= 0).then(|| self.samples.get(pos as usize).copied()).flatten()
    }

    /// `len` samples starting at index n.
    pub fn window(&self, n: isize, len: usize) -> Result<&[Complex64]> {
        let start = n + self.origin;
        let end = start + len as isize;
        if start < 0 || end > self.samples.len() as isize {
            return Err(Error::OutOfRange {
                start: n,
                end: n + len as isize,
                lo: self.first_index(),
                hi: self.end_index(),
            });
        }
        Ok(&self.samples[start as usize..end as usize])
    }

    pub fn mean_power(&self, range: Range<usize>) -> f64 {
        mean_power(&self.samples[range])
    }
}

pub(crate) fn mean_power(samples: &[Complex64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / samples.len() as f64
}

/// Unitary (I)DFT pair working on natural-order columns.
#[derive(Clone)]
pub struct Transformer {
    n_fft: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Transformer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transformer").field("n_fft", &self.n_fft).finish()
    }
}

impl Transformer {
    pub fn new(n_fft: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n_fft,
            forward: planner.plan_fft_forward(n_fft),
            inverse: planner.plan_fft_inverse(n_fft),
        }
    }

    /// x[n] = N^{-1/2} Σ_k d_k e^{j2πnk/N}, n = 0..N-1.
    pub fn synthesize(&self, column: &[Complex64]) -> Vec<Complex64> {
        let n = self.n_fft;
        let half = n / 2;
        let mut buf = vec![Complex64::default(); n];
        for (pos, d) in column.iter().enumerate() {
            // natural position `pos` is k = pos - N/2, bin k mod N
            buf[(pos + half) % n] = *d;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / (n as f64).sqrt();
        buf.iter_mut().for_each(|x| *x *= scale);
        buf
    }

    /// d_k = N^{-1/2} Σ_n x[n] e^{-j2πnk/N}, returned in natural order.
    pub fn analyze(&self, body: &[Complex64]) -> Vec<Complex64> {
        let n = self.n_fft;
        let half = n / 2;
        let mut buf = body.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / (n as f64).sqrt();
        (0..n).map(|pos| buf[(pos + half) % n] * scale).collect()
    }
}

/// One symbol with its cyclic prefix; origin sits on the first body sample.
pub fn modulate_symbol(column: &[Complex64], spec: &FrameSpec) -> Result<TimeSignal> {
    modulate_with(&Transformer::new(spec.n_fft()), column, spec)
}

fn modulate_with(tx: &Transformer, column: &[Complex64], spec: &FrameSpec) -> Result<TimeSignal> {
    let n = spec.n_fft();
    if column.len() != n {
        return Err(invalid(format!(
            "symbol column has {} entries, expected {n}",
            column.len()
        )));
    }
    let body = tx.synthesize(column);
    let mut samples = Vec::with_capacity(n + spec.n_cp);
    samples.extend_from_slice(&body[n - spec.n_cp..]);
    samples.extend_from_slice(&body);
    Ok(TimeSignal::new(samples, spec.n_cp as isize))
}

/// Preamble column and the bits that its QPSK points carry.
#[derive(Debug, Clone, PartialEq)]
pub struct Preamble {
    pub column: Vec<Complex64>,
    /// Two bits per even occupied subcarrier, ascending `k`.
    pub bits: Vec<bool>,
}

impl Preamble {
    /// Subcarriers that carry preamble symbols, ascending.
    pub fn subcarriers(map: &SubcarrierMap) -> Vec<i32> {
        map.even().collect()
    }
}

/// Random QPSK on the even occupied subcarriers, scaled so the preamble has
/// the mean time-domain power of a unit-power data symbol on the same map.
pub fn generate_preamble<R: Rng + ?Sized>(map: &SubcarrierMap, rng: &mut R) -> Result<Preamble> {
    let active: Vec<i32> = map.even().collect();
    if active.is_empty() {
        return Err(Error::UnsatisfiablePreamble);
    }
    // data symbol power α/N, preamble c²·β/N
    let scale = (map.len() as f64 / active.len() as f64).sqrt();
    let bits: Vec<bool> = (0..2 * active.len()).map(|_| rng.random()).collect();
    let mut column = vec![Complex64::default(); map.n_fft()];
    for (k, pair) in active.iter().zip(bits.chunks_exact(2)) {
        column[map.position(*k)] = qpsk_symbol(pair[0], pair[1]) * scale;
    }
    Ok(Preamble { column, bits })
}

/// Unit-power random QPSK on every occupied subcarrier.
pub fn random_data_column<R: Rng + ?Sized>(map: &SubcarrierMap, rng: &mut R) -> Vec<Complex64> {
    let mut column = vec![Complex64::default(); map.n_fft()];
    for &k in map.occupied() {
        column[map.position(k)] = qpsk_symbol(rng.random(), rng.random());
    }
    column
}

/// Concatenates the empty prefix and the CP-extended symbols of `grid`.
pub fn build_frame(grid: &SymbolGrid, spec: &FrameSpec) -> Result<TimeSignal> {
    if grid.n_symbols() != spec.n_symbols {
        return Err(invalid(format!(
            "grid has {} symbols, frame expects {}",
            grid.n_symbols(),
            spec.n_symbols
        )));
    }
    let tx = Transformer::new(spec.n_fft());
    let mut samples = vec![Complex64::default(); spec.n_empty_prefix * spec.symbol_len()];
    samples.reserve(spec.n_symbols * spec.symbol_len());
    for column in grid.columns() {
        samples.extend(modulate_with(&tx, column, spec)?.samples);
    }
    Ok(TimeSignal::new(samples, spec.origin() as isize))
}

/// A transmitted frame with everything a scorer needs to know about it.
#[derive(Debug, Clone)]
pub struct Frame {
    pub signal: TimeSignal,
    pub grid: SymbolGrid,
    pub preamble: Preamble,
}

/// Preamble followed by `P - 1` random QPSK data symbols.
pub fn random_frame<R: Rng + ?Sized>(spec: &FrameSpec, rng: &mut R) -> Result<Frame> {
    let preamble = generate_preamble(&spec.map, rng)?;
    let mut columns = Vec::with_capacity(spec.n_symbols);
    columns.push(preamble.column.clone());
    columns.extend((1..spec.n_symbols).map(|_| random_data_column(&spec.map, rng)));
    let grid = SymbolGrid::new(&spec.map, columns)?;
    let signal = build_frame(&grid, spec)?;
    Ok(Frame {
        signal,
        grid,
        preamble,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(map: SubcarrierMap, n_cp: usize, p: usize, empty: usize) -> FrameSpec {
        FrameSpec::new(map, n_cp, p, empty).unwrap()
    }

    fn full_map(n: usize) -> SubcarrierMap {
        let h = (n / 2) as i32;
        SubcarrierMap::new(n, -h..h).unwrap()
    }

    /// x[n] by the defining N-term sum.
    fn idft_direct(column: &[Complex64], n: isize) -> Complex64 {
        let len = column.len();
        let h = (len / 2) as isize;
        column
            .iter()
            .enumerate()
            .map(|(pos, d)| {
                let k = pos as isize - h;
                let phase = 2.0 * std::f64::consts::PI * (n * k) as f64 / len as f64;
                d * Complex64::from_polar(1.0, phase)
            })
            .sum::<Complex64>()
            / (len as f64).sqrt()
    }

    #[test]
    fn map_rejects_bad_input() {
        assert!(SubcarrierMap::new(8, [4]).is_err());
        assert!(SubcarrierMap::new(8, [-5]).is_err());
        assert!(SubcarrierMap::new(8, [1, 1]).is_err());
        assert!(SubcarrierMap::new(8, std::iter::empty()).is_err());
        assert!(SubcarrierMap::new(6, [1]).is_err());
        assert!(SubcarrierMap::parse(8, "3..1").is_err());
    }

    #[test]
    fn parse_reference_map() {
        let map = SubcarrierMap::notched_256();
        assert_eq!(map.len(), 158);
        assert!(map.contains(-100) && map.contains(3) && map.contains(46));
        assert!(!map.contains(0) && !map.contains(4) && !map.contains(45));
    }

    #[test]
    fn notch_of_42_matches_reference_map() {
        let notched = SubcarrierMap::with_notch(256, -100..=100, 24.5, 42).unwrap();
        assert_eq!(notched, SubcarrierMap::notched_256());
        let open = SubcarrierMap::with_notch(256, -100..=100, 24.5, 0).unwrap();
        assert_eq!(open.len(), 200);
    }

    #[test]
    fn dc_only_symbol_is_constant() {
        let n = 256;
        let s = spec(full_map(n), 32, 1, 0);
        let mut col = vec![Complex64::default(); n];
        col[n / 2] = Complex64::new(16.0, 0.0);
        let sym = modulate_symbol(&col, &s).unwrap();
        assert_eq!(sym.len(), 288);
        for x in &sym.samples {
            assert!((x - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_symbol_is_zero() {
        let s = spec(full_map(256), 32, 1, 0);
        let sym = modulate_symbol(&vec![Complex64::default(); 256], &s).unwrap();
        assert!(sym.samples.iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn all_ones_symbol_is_impulse() {
        let n = 256;
        let s = spec(full_map(n), 32, 1, 0);
        let col = vec![Complex64::new(1.0, 0.0); n];
        let sym = modulate_symbol(&col, &s).unwrap();
        // frozen from the direct sum: x[0] = 16, |x[n]| < 1e-9 elsewhere
        let direct0 = idft_direct(&col, 0);
        assert!((direct0 - Complex64::new(16.0, 0.0)).norm() < 1e-9);
        assert!((sym.at(0).unwrap() - Complex64::new(16.0, 0.0)).norm() < 1e-9);
        for n in 1..256 {
            assert!(sym.at(n).unwrap().norm() < 1e-9);
        }
    }

    #[test]
    fn modulation_matches_direct_sum_with_prefix() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = FrameSpec::reference();
        let col = random_data_column(&s.map, &mut rng);
        let sym = modulate_symbol(&col, &s).unwrap();
        for n in -32..256isize {
            assert!((sym.at(n).unwrap() - idft_direct(&col, n)).norm() < 1e-10);
        }
    }

    #[test]
    fn modulate_rejects_wrong_dimension() {
        let s = FrameSpec::reference();
        assert!(modulate_symbol(&[Complex64::default(); 10], &s).is_err());
    }

    #[test]
    fn preamble_uses_even_subcarriers_only() {
        let map = SubcarrierMap::new(8, [-2, -1, 1, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pre = generate_preamble(&map, &mut rng).unwrap();
        let nonzero: Vec<i32> = (0..8)
            .filter(|&p| pre.column[p].norm() > 0.0)
            .map(|p| map.index_at(p))
            .collect();
        assert_eq!(nonzero, vec![-2, 2]);
    }

    #[test]
    fn preamble_count_on_reference_map() {
        let map = SubcarrierMap::notched_256();
        // evens of -100..-1 (50), 1..3 (1), 46..100 (28)
        let expected = (-100..=-1).chain(1..=3).chain(46..=100).filter(|k: &i32| k % 2 == 0).count();
        assert_eq!(expected, 79);
        let pre = generate_preamble(&map, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(pre.column.iter().filter(|d| d.norm() > 0.0).count(), 79);
        assert_eq!(pre.bits.len(), 158);
    }

    #[test]
    fn preamble_needs_even_subcarrier() {
        let map = SubcarrierMap::new(8, [-3, 1, 3]).unwrap();
        let err = generate_preamble(&map, &mut ChaCha8Rng::seed_from_u64(0)).unwrap_err();
        assert!(matches!(err, Error::UnsatisfiablePreamble));
    }

    #[test]
    fn preamble_body_repeats_every_half_symbol() {
        let s = FrameSpec::reference();
        let pre = generate_preamble(&s.map, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let sym = modulate_symbol(&pre.column, &s).unwrap();
        let body = sym.window(0, 256).unwrap();
        let peak = body.iter().map(|x| x.norm()).fold(0.0, f64::max);
        for n in 0..128 {
            assert!((body[n] - body[n + 128]).norm() < 1e-12 * peak.max(1.0));
        }
    }

    #[test]
    fn frame_bookkeeping() {
        let map = SubcarrierMap::notched_256();
        let one = spec(map.clone(), 32, 1, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = random_frame(&one, &mut rng).unwrap();
        assert_eq!(f.signal.len(), 288);
        assert_eq!(f.signal.origin, 32);

        let full = FrameSpec::reference();
        let f = random_frame(&full, &mut rng).unwrap();
        assert_eq!(f.signal.len(), 14 * 288);
        assert_eq!(full.active_range(), 3 * 288..14 * 288);
        assert!(f.signal.samples[..3 * 288].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn grid_rejects_unoccupied_energy() {
        let map = SubcarrierMap::new(8, [1, 2]).unwrap();
        let mut col = vec![Complex64::default(); 8];
        col[map.position(3)] = Complex64::new(1.0, 0.0);
        assert!(SymbolGrid::new(&map, vec![col]).is_err());
    }

    #[test]
    fn build_frame_checks_symbol_count() {
        let s = FrameSpec::reference();
        let grid = SymbolGrid::new(&s.map, vec![vec![Complex64::default(); 256]]).unwrap();
        assert!(build_frame(&grid, &s).is_err());
    }

    #[test]
    fn data_symbols_are_nulled_outside_map() {
        let s = FrameSpec::reference();
        let tx = Transformer::new(256);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let col = random_data_column(&s.map, &mut rng);
            let sym = modulate_symbol(&col, &s).unwrap();
            let spectrum = tx.analyze(sym.window(0, 256).unwrap());
            for (pos, d) in spectrum.iter().enumerate() {
                if !s.map.contains(s.map.index_at(pos)) {
                    assert!(d.norm() < 1e-10 * 16.0);
                }
            }
            // Parseval
            let e_time: f64 = sym.window(0, 256).unwrap().iter().map(|x| x.norm_sqr()).sum();
            let e_freq: f64 = col.iter().map(|x| x.norm_sqr()).sum();
            assert!((e_time - e_freq).abs() < 1e-9 * e_freq);
        }
    }

    #[test]
    fn preamble_and_data_power_agree() {
        // Monte-Carlo over 10^3 frames: data-only region vs preamble body
        let s = FrameSpec::new(SubcarrierMap::notched_256(), 32, 2, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (mut pre_power, mut data_power) = (0.0, 0.0);
        let trials = 1000;
        for _ in 0..trials {
            let f = random_frame(&s, &mut rng).unwrap();
            pre_power += mean_power(f.signal.window(0, 256).unwrap());
            data_power += mean_power(f.signal.window(288, 256).unwrap());
        }
        let ratio = pre_power / data_power;
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
    }
}
