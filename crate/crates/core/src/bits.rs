//! Fixed-width binary words.
//!
//! A [`BitString`] is rendered most-significant-first, so `"01"` has value 1
//! and its leftmost character is bit index 0. Cells are consecutive groups of
//! characters counted from the left.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Widest word a [`BitString`] can hold.
pub const MAX_WIDTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitError {
    #[error("bit string width must be between 1 and {MAX_WIDTH}, got {0}")]
    BadWidth(usize),
    #[error("value {value} does not fit in {width} bits")]
    Overflow { value: u64, width: usize },
    #[error("invalid character {0:?} in bit string")]
    BadChar(char),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    // Field order matters for the derived `Ord`: width first, then value.
    width: u8,
    value: u64,
}

fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl BitString {
    pub fn new(value: u64, width: usize) -> Result<Self, BitError> {
        if width == 0 || width > MAX_WIDTH {
            return Err(BitError::BadWidth(width));
        }
        if value & !mask(width) != 0 {
            return Err(BitError::Overflow { value, width });
        }
        Ok(Self {
            width: width as u8,
            value,
        })
    }

    /// All-zero word of the given width.
    pub fn zeros(width: usize) -> Result<Self, BitError> {
        Self::new(0, width)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    /// Bit at position `i`, counted from the left.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.width(), "bit index {i} out of range");
        (self.value >> (self.width() - 1 - i)) & 1 == 1
    }

    /// Value of cell `index` when the word is cut into cells of `cell_width`.
    pub fn cell(&self, index: usize, cell_width: usize) -> u64 {
        let shift = self.width() - (index + 1) * cell_width;
        (self.value >> shift) & mask(cell_width)
    }

    pub fn cells(&self, cell_width: usize) -> impl Iterator<Item = u64> + '_ {
        (0..self.width() / cell_width).map(move |i| self.cell(i, cell_width))
    }

    /// Builds a word from cell values listed left to right.
    pub fn from_cells(cells: &[u64], cell_width: usize) -> Result<Self, BitError> {
        let mut value = 0u64;
        for &c in cells {
            if c & !mask(cell_width) != 0 {
                return Err(BitError::Overflow {
                    value: c,
                    width: cell_width,
                });
            }
            value = (value << cell_width) | c;
        }
        Self::new(value, cells.len() * cell_width)
    }

    pub fn complement(&self) -> Self {
        Self {
            width: self.width,
            value: !self.value & mask(self.width()),
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.width, other.width, "xor of mismatched widths");
        Self {
            width: self.width,
            value: self.value ^ other.value,
        }
    }

    /// Inner product modulo 2.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.width, other.width, "dot of mismatched widths");
        (self.value & other.value).count_ones() % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn count_ones(&self) -> u32 {
        self.value.count_ones()
    }

    /// Every word of the given width in increasing order.
    pub fn all(width: usize) -> Result<impl Iterator<Item = BitString>, BitError> {
        if width == 0 || width > 16 {
            return Err(BitError::BadWidth(width));
        }
        Ok((0..1u64 << width).map(move |v| BitString {
            width: width as u8,
            value: v,
        }))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = BitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let width = s.chars().count();
        if width == 0 || width > MAX_WIDTH {
            return Err(BitError::BadWidth(width));
        }
        let mut value = 0u64;
        for c in s.chars() {
            value = (value << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    other => return Err(BitError::BadChar(other)),
                };
        }
        Self::new(value, width)
    }
}

/// Shorthand used throughout the tests: panics on malformed input.
pub fn bits(s: &str) -> BitString {
    s.parse().unwrap_or_else(|e| panic!("bad bit string {s:?}: {e}"))
}
