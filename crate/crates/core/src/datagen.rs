//! Deterministic input distributions for benchmarks and verification.
//!
//! Each array is a pure function of its [`DistributionSpec`]. Shuffles use a
//! SplitMix64 stream derived from `(seed, kind, n)`, so every algorithm in a
//! benchmark sees the same input for the same cell.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Uniform,
    DupSq,
    Dup8,
    Mod8,
    Ones,
    Sort50,
    Sort90,
    Sort99,
    Organ,
    Merge,
    Asc,
    Desc,
}

impl Kind {
    pub const ALL: [Kind; 12] = [
        Kind::Uniform,
        Kind::DupSq,
        Kind::Dup8,
        Kind::Mod8,
        Kind::Ones,
        Kind::Sort50,
        Kind::Sort90,
        Kind::Sort99,
        Kind::Organ,
        Kind::Merge,
        Kind::Asc,
        Kind::Desc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Uniform => "uniform",
            Kind::DupSq => "dupsq",
            Kind::Dup8 => "dup8",
            Kind::Mod8 => "mod8",
            Kind::Ones => "ones",
            Kind::Sort50 => "sort50",
            Kind::Sort90 => "sort90",
            Kind::Sort99 => "sort99",
            Kind::Organ => "organ",
            Kind::Merge => "merge",
            Kind::Asc => "asc",
            Kind::Desc => "desc",
        }
    }

    /// Percentage of the array that is sorted after shuffling, for the
    /// `sortP` kinds.
    fn sorted_percent(self) -> Option<usize> {
        match self {
            Kind::Sort50 => Some(50),
            Kind::Sort90 => Some(90),
            Kind::Sort99 => Some(99),
            _ => None,
        }
    }

    fn shuffled(self) -> bool {
        matches!(
            self,
            Kind::Uniform | Kind::DupSq | Kind::Dup8 | Kind::Mod8 | Kind::Sort50 | Kind::Sort90 | Kind::Sort99
        )
    }

    fn stream_tag(self) -> u64 {
        (self as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown distribution `{0}` (expected one of uniform, dupsq, dup8, mod8, ones, sort50, sort90, sort99, organ, merge, asc, desc)")]
    Kind(String),
    #[error("unknown element type `{0}` (expected int64, str or bigstr)")]
    ElementType(String),
}

impl FromStr for Kind {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ParseError::Kind(s.to_owned()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementType {
    Int64,
    Str,
    BigStr,
}

impl ElementType {
    pub const ALL: [ElementType; 3] = [ElementType::Int64, ElementType::Str, ElementType::BigStr];

    pub fn name(self) -> &'static str {
        match self {
            ElementType::Int64 => "int64",
            ElementType::Str => "str",
            ElementType::BigStr => "bigstr",
        }
    }

    /// Zeros prepended to every string of this type unless overridden.
    pub fn default_pad(self) -> usize {
        match self {
            ElementType::BigStr => 1000,
            _ => 0,
        }
    }
}

impl fmt::Display for ElementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementType {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ElementType::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| ParseError::ElementType(s.to_owned()))
    }
}

/// Recipe for one input array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DistributionSpec {
    pub kind: Kind,
    pub n: usize,
    pub element_type: ElementType,
    /// Zeros prepended to string encodings.
    pub pad_prefix: usize,
    pub seed: u64,
}

impl DistributionSpec {
    pub fn new(kind: Kind, n: usize, element_type: ElementType, seed: u64) -> Self {
        DistributionSpec {
            kind,
            n,
            element_type,
            pad_prefix: element_type.default_pad(),
            seed,
        }
    }

    pub fn int64(kind: Kind, n: usize, seed: u64) -> Self {
        Self::new(kind, n, ElementType::Int64, seed)
    }

    fn rng(&self) -> SplitMix64 {
        let mut root = SplitMix64::seed_from_u64(self.seed);
        let kind_seed = root.next_u64() ^ self.kind.stream_tag();
        SplitMix64::seed_from_u64(kind_seed ^ (self.n as u64).wrapping_mul(0xD1B5_4A32_D192_ED03))
    }
}

/// A generated array in its element representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dataset {
    Int64(Vec<i64>),
    Str(Vec<String>),
}

impl Dataset {
    pub fn len(&self) -> usize {
        match self {
            Dataset::Int64(v) => v.len(),
            Dataset::Str(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// 64-bit FNV-1a over the encoded elements. Stable across runs and
    /// platforms.
    pub fn fingerprint(&self) -> u64 {
        let mut hash = Fnv1a::default();
        match self {
            Dataset::Int64(v) => v.iter().for_each(|x| hash.write(&x.to_le_bytes())),
            Dataset::Str(v) => v.iter().for_each(|s| {
                hash.write(s.as_bytes());
                hash.write(&[0xff]);
            }),
        }
        hash.0
    }

    /// Writes the `gen` file format: a `# kind n element_type seed` header,
    /// then one value per line.
    pub fn write_to<W: Write>(&self, spec: &DistributionSpec, mut out: W) -> io::Result<()> {
        writeln!(out, "# {} {} {} {}", spec.kind, spec.n, spec.element_type, spec.seed)?;
        match self {
            Dataset::Int64(v) => v.iter().try_for_each(|x| writeln!(out, "{x}")),
            Dataset::Str(v) => v.iter().try_for_each(|s| writeln!(out, "{s}")),
        }
    }
}

struct Fnv1a(u64);

impl Default for Fnv1a {
    fn default() -> Self {
        Fnv1a(0xcbf2_9ce4_8422_2325)
    }
}

impl Fnv1a {
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
}

/// `base^8 mod modulus` by repeated squaring with 128-bit intermediates.
fn pow8_mod(base: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut x = base as u128 % m;
    for _ in 0..3 {
        x = x * x % m;
    }
    x as u64
}

/// The distribution's values before any shuffling.
pub fn unshuffled(kind: Kind, n: usize) -> Vec<i64> {
    let half_up = n.div_ceil(2);
    let half_down = n / 2;
    match kind {
        Kind::Uniform | Kind::Asc | Kind::Sort50 | Kind::Sort90 | Kind::Sort99 => (0..n as i64).collect(),
        Kind::Desc => (0..n as i64).rev().collect(),
        Kind::DupSq => {
            let modulus = n.isqrt().max(1) as i64;
            (0..n as i64).map(|i| i % modulus).collect()
        }
        Kind::Dup8 => (0..n as u64)
            .map(|i| ((pow8_mod(i, n as u64) + n as u64 / 2) % n as u64) as i64)
            .collect(),
        Kind::Mod8 => (0..n as i64).map(|i| i % 8).collect(),
        Kind::Ones => vec![1; n],
        Kind::Organ => (0..half_up as i64).chain((0..half_down as i64).rev()).collect(),
        Kind::Merge => (0..half_up as i64).chain(0..half_down as i64).collect(),
    }
}

/// Integer values for `spec`, shuffled and prefix-sorted as the kind demands.
pub fn generate_values(spec: &DistributionSpec) -> Vec<i64> {
    let mut values = unshuffled(spec.kind, spec.n);
    if spec.kind.shuffled() {
        let mut rng = spec.rng();
        fisher_yates(&mut values, &mut rng);
    }
    if let Some(percent) = spec.kind.sorted_percent() {
        let prefix = spec.n * percent / 100;
        values[..prefix].sort_unstable();
    }
    values
}

/// Uniform in-place shuffle driven by `rng`.
pub fn fisher_yates<T, R: Rng>(v: &mut [T], rng: &mut R) {
    for i in (1..v.len()).rev() {
        let j = rng.random_range(0..=i as u64) as usize;
        v.swap(i, j);
    }
}

/// Decimal digits needed so every value in `0..n` fits: the smallest `w`
/// with `10^w >= n`.
pub fn decimal_width(n: usize) -> usize {
    let mut width = 0;
    let mut reach = 1u128;
    while reach < n as u128 {
        reach *= 10;
        width += 1;
    }
    width
}

/// Zero-padded decimal so that byte order matches numeric order for every
/// value below `10^width`.
pub fn encode_str(value: i64, width: usize, pad_prefix: usize) -> String {
    let mut s = String::with_capacity(pad_prefix + width.max(1));
    s.extend(std::iter::repeat_n('0', pad_prefix));
    s.push_str(&format!("{value:0width$}"));
    s
}

/// Generates the array described by `spec`.
pub fn generate(spec: &DistributionSpec) -> Dataset {
    let values = generate_values(spec);
    match spec.element_type {
        ElementType::Int64 => Dataset::Int64(values),
        ElementType::Str | ElementType::BigStr => {
            let width = decimal_width(spec.n);
            Dataset::Str(
                values
                    .into_iter()
                    .map(|v| encode_str(v, width, spec.pad_prefix))
                    .collect(),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formula_examples() {
        assert_eq!(unshuffled(Kind::Mod8, 10), [0, 1, 2, 3, 4, 5, 6, 7, 0, 1]);
        assert_eq!(unshuffled(Kind::Ones, 4), [1, 1, 1, 1]);
        assert_eq!(unshuffled(Kind::Organ, 5), [0, 1, 2, 1, 0]);
        assert_eq!(unshuffled(Kind::Merge, 5), [0, 1, 2, 0, 1]);
        assert_eq!(unshuffled(Kind::Desc, 3), [2, 1, 0]);
        assert_eq!(unshuffled(Kind::DupSq, 10), [0, 1, 2, 0, 1, 2, 0, 1, 2, 0]);
    }

    #[test]
    fn dup8_against_direct_power() {
        // i^8 mod 16 is 0 for even i and 1 for odd i.
        for i in 0u64..16 {
            assert_eq!(i.pow(8) % 16, i % 2);
        }
        assert_eq!(
            unshuffled(Kind::Dup8, 16),
            [8, 9, 8, 9, 8, 9, 8, 9, 8, 9, 8, 9, 8, 9, 8, 9]
        );
        // Large n, checked against u128 exponentiation where it does not
        // overflow (i < 2^16).
        let n = 1_000_003u64;
        let got = unshuffled(Kind::Dup8, n as usize);
        for i in [0u64, 1, 2, 12345, 65535] {
            let direct = ((i as u128).pow(8) % n as u128) as u64;
            assert_eq!(got[i as usize] as u64, (direct + n / 2) % n);
        }
    }

    #[test]
    fn degenerate_sizes() {
        for kind in Kind::ALL {
            assert!(generate_values(&DistributionSpec::int64(kind, 0, 1)).is_empty());
            assert_eq!(generate_values(&DistributionSpec::int64(kind, 1, 1)).len(), 1);
        }
    }

    #[test]
    fn widths() {
        assert_eq!(decimal_width(0), 0);
        assert_eq!(decimal_width(1), 0);
        assert_eq!(decimal_width(10), 1);
        assert_eq!(decimal_width(11), 2);
        assert_eq!(decimal_width(1000), 3);
        assert_eq!(decimal_width(1001), 4);
        assert_eq!(encode_str(7, 3, 0), "007");
        assert_eq!(encode_str(7, 3, 2), "00007");
    }

    #[test]
    fn permutation_kinds() {
        for kind in [
            Kind::Uniform,
            Kind::Sort50,
            Kind::Sort90,
            Kind::Sort99,
            Kind::Asc,
            Kind::Desc,
        ] {
            for n in [0, 1, 5, 100, 1000] {
                let mut v = generate_values(&DistributionSpec::int64(kind, n, 42));
                v.sort_unstable();
                assert_eq!(v, (0..n as i64).collect::<Vec<_>>(), "{kind} n={n}");
            }
        }
    }

    #[test]
    fn sorted_prefixes() {
        for (kind, p) in [(Kind::Sort50, 50), (Kind::Sort90, 90), (Kind::Sort99, 99)] {
            let n = 1000;
            let v = generate_values(&DistributionSpec::int64(kind, n, 3));
            assert!(v[..n * p / 100].is_sorted());
            assert!(!v.is_sorted());
        }
    }

    #[test]
    fn shuffles_depend_on_seed_kind_and_n() {
        let a = generate_values(&DistributionSpec::int64(Kind::Uniform, 100, 1));
        let b = generate_values(&DistributionSpec::int64(Kind::Uniform, 100, 2));
        assert_ne!(a, b);
        let c = generate_values(&DistributionSpec::int64(Kind::Sort50, 100, 1));
        assert_ne!(a[50..], c[50..]);
        assert_eq!(a, generate_values(&DistributionSpec::int64(Kind::Uniform, 100, 1)));
    }

    #[test]
    fn golden_fingerprints() {
        // Frozen from the first run; any change to the generators, the stream
        // derivation or the encodings shows up here.
        let cases = [
            (DistributionSpec::int64(Kind::Uniform, 1000, 1), 0x91cea783d599e375u64),
            (DistributionSpec::int64(Kind::Mod8, 1000, 1), 0x766356eb50d5e105),
            (DistributionSpec::int64(Kind::Dup8, 1000, 7), 0x231076006169905d),
            (
                DistributionSpec::new(Kind::Sort90, 1000, ElementType::Str, 1),
                0x718e80086d48d409,
            ),
            (
                DistributionSpec::new(Kind::Organ, 100, ElementType::BigStr, 1),
                0x4850d7ef730b8043,
            ),
        ];
        for (spec, want) in cases {
            let got = generate(&spec).fingerprint();
            assert_eq!(got, want, "{spec:?} -> {got:#x}");
        }
    }

    #[test]
    fn gen_file_format() {
        let spec = DistributionSpec::new(Kind::Mod8, 3, ElementType::Str, 5);
        let data = Dataset::Str(vec!["0".into(), "1".into(), "2".into()]);
        let mut out = Vec::new();
        data.write_to(&spec, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "# mod8 3 str 5\n0\n1\n2\n");
    }

    #[test]
    fn parse_names() {
        for kind in Kind::ALL {
            assert_eq!(kind.name().parse::<Kind>(), Ok(kind));
        }
        assert!("zipf".parse::<Kind>().is_err());
        assert_eq!("bigstr".parse::<ElementType>(), Ok(ElementType::BigStr));
        assert!("f32".parse::<ElementType>().is_err());
    }

    proptest! {
        #[test]
        fn string_order_matches_numeric(n in 1usize..100_000, a in 0i64..100_000, b in 0i64..100_000, pad in 0usize..3) {
            let a = a % n as i64;
            let b = b % n as i64;
            let w = decimal_width(n);
            let (sa, sb) = (encode_str(a, w, pad), encode_str(b, w, pad));
            prop_assert_eq!(a.cmp(&b), sa.cmp(&sb));
        }
    }
}
