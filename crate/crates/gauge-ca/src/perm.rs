//! Exact algebra of the symmetric group S(K) over the color set `{0, …, K-1}`.
//!
//! A [`Perm`] is stored as its image table (`images[i]` is where color `i`
//! goes), which makes application O(1) and equality a plain `Vec` compare.
//! These permutations serve double duty: as the per-site operators of a gauge
//! transformation and as the link values of a gauge field.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Error;

/// A color value, i.e. an element of `{0, …, K-1}`.
pub type Color = u8;

/// Largest color count [`enumerate`] accepts unless a caller raises the bound.
/// 6! = 720 group elements is the most a desk-scale exhaustive search wants.
pub const ENUMERATE_BOUND: u8 = 6;

/// A permutation of the `K` color values, stored as an image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<Color>,
}

impl Perm {
    /// The identity of S(k).
    ///
    /// # Panics
    /// Panics if `colors` is 0.
    pub fn identity(colors: u8) -> Perm {
        assert!(colors >= 1, "color count must be at least 1");
        Perm {
            images: (0..colors).collect(),
        }
    }

    /// Builds a permutation from its image table, validating that it is a
    /// bijection of `{0, …, len-1}`.
    pub fn from_images(images: Vec<Color>) -> Result<Perm, Error> {
        if images.is_empty() {
            return Err(Error::invalid("permutation must have at least one color"));
        }
        if images.len() > usize::from(u8::MAX) {
            return Err(Error::invalid("color count above 255 is unsupported"));
        }
        let mut seen = vec![false; images.len()];
        for &c in &images {
            let slot = usize::from(c);
            if slot >= images.len() || seen[slot] {
                return Err(Error::invalid(format!(
                    "not a bijection: image list {images:?}"
                )));
            }
            seen[slot] = true;
        }
        Ok(Perm { images })
    }

    /// The transposition of `a` and `b` inside S(colors).
    pub fn transposition(colors: u8, a: Color, b: Color) -> Perm {
        assert!(a < colors && b < colors, "colors out of range");
        let mut images: Vec<Color> = (0..colors).collect();
        images.swap(usize::from(a), usize::from(b));
        Perm { images }
    }

    /// Number of colors this permutation acts on (the K of S(K)).
    pub fn degree(&self) -> u8 {
        self.images.len() as u8
    }

    pub fn images(&self) -> &[Color] {
        &self.images
    }

    /// Image of one color.
    ///
    /// # Panics
    /// Panics if `c` is outside `{0, …, K-1}`.
    pub fn apply(&self, c: Color) -> Color {
        self.images[usize::from(c)]
    }

    /// Preimage of one color; `apply_inverse(apply(c)) == c` without
    /// materializing the inverse table.
    pub fn apply_inverse(&self, c: Color) -> Color {
        self.images
            .iter()
            .position(|&v| v == c)
            .expect("color out of range") as Color
    }

    /// Composition `self ∘ other`: apply `other` first, then `self`.
    ///
    /// # Panics
    /// Panics if the degrees differ.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(
            self.degree(),
            other.degree(),
            "compose: degree mismatch ({} vs {})",
            self.degree(),
            other.degree()
        );
        Perm {
            images: other
                .images
                .iter()
                .map(|&c| self.images[usize::from(c)])
                .collect(),
        }
    }

    /// The group inverse: `inverse().apply(apply(c)) == c`.
    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &c) in self.images.iter().enumerate() {
            images[usize::from(c)] = i as Color;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &c)| i == usize::from(c))
    }

    /// Number of colors left fixed.
    pub fn fixed_points(&self) -> u64 {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &c)| *i == usize::from(c))
            .count() as u64
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Perm {
    type Err = Error;

    /// Parses the textual form `[1,0,2]`.
    fn from_str(s: &str) -> Result<Perm, Error> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| {
                Error::invalid(format!("permutation literal must look like [1,0,2], got `{s}`"))
            })?;
        let images = body
            .split(',')
            .map(|tok| {
                tok.trim().parse::<Color>().map_err(|_| {
                    Error::invalid(format!(
                        "bad color index `{}` in permutation literal `{s}`",
                        tok.trim()
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Perm::from_images(images)
    }
}

/// k! with saturation, used for resource-limit reporting.
pub(crate) fn factorial(k: u8) -> u128 {
    (1..=u128::from(k)).fold(1u128, |acc, i| acc.saturating_mul(i))
}

/// All k! permutations of S(k) in lexicographic order of their image tables.
///
/// Fails with a resource-limit error above [`ENUMERATE_BOUND`] colors.
pub fn enumerate(colors: u8) -> Result<Vec<Perm>, Error> {
    enumerate_with_bound(colors, ENUMERATE_BOUND)
}

/// Same as [`enumerate`] with an explicit bound on the color count.
pub fn enumerate_with_bound(colors: u8, bound: u8) -> Result<Vec<Perm>, Error> {
    if colors == 0 {
        return Err(Error::invalid("color count must be at least 1"));
    }
    if colors > bound {
        return Err(Error::ResourceLimit {
            needed: factorial(colors),
            bound: factorial(bound),
        });
    }
    let mut images: Vec<Color> = (0..colors).collect();
    let mut all = Vec::with_capacity(factorial(colors) as usize);
    loop {
        all.push(Perm {
            images: images.clone(),
        });
        if !next_lex(&mut images) {
            break;
        }
    }
    Ok(all)
}

/// Advances `arr` to its lexicographic successor; false once wrapped.
fn next_lex(arr: &mut [Color]) -> bool {
    if arr.len() < 2 {
        return false;
    }
    let mut i = arr.len() - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = arr.len() - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}

/// A uniformly random element of S(colors) drawn by shuffling the identity
/// table (Fisher–Yates). The same seeded stream always yields the same
/// permutation sequence.
pub fn random_perm<R: Rng + ?Sized>(colors: u8, rng: &mut R) -> Perm {
    assert!(colors >= 1, "color count must be at least 1");
    let mut images: Vec<Color> = (0..colors).collect();
    images.shuffle(rng);
    Perm { images }
}
