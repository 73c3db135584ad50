use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::{Fel, Field};

/// A 3x3 matrix whose last row is `(0, 0, 1)`.
///
/// Only the top two rows are stored. The derived ordering compares entries
/// row-major by bit value, which is the order of the canonical byte encoding.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat3 {
    top: [[Fel; 3]; 2],
}

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3 {
        top: [
            [Fel::ONE, Fel::ZERO, Fel::ZERO],
            [Fel::ZERO, Fel::ONE, Fel::ZERO],
        ],
    };

    pub fn new(top: [[Fel; 3]; 2]) -> Mat3 {
        Mat3 { top }
    }

    /// `[[a, b, alpha], [c, d, beta], [0, 0, 1]]`.
    pub fn from_block(block: [[Fel; 2]; 2], column: [Fel; 2]) -> Mat3 {
        Mat3 {
            top: [
                [block[0][0], block[0][1], column[0]],
                [block[1][0], block[1][1], column[1]],
            ],
        }
    }

    pub fn translation(alpha: Fel, beta: Fel) -> Mat3 {
        Mat3::from_block(
            [[Fel::ONE, Fel::ZERO], [Fel::ZERO, Fel::ONE]],
            [alpha, beta],
        )
    }

    pub fn entry(&self, row: usize, col: usize) -> Fel {
        match row {
            0 | 1 => self.top[row][col],
            2 if col == 2 => Fel::ONE,
            2 => Fel::ZERO,
            _ => panic!("row index {row} out of range"),
        }
    }

    pub fn rows(&self) -> [[Fel; 3]; 2] {
        self.top
    }

    /// Upper-left 2x2 block.
    pub fn block(&self) -> [[Fel; 2]; 2] {
        [
            [self.top[0][0], self.top[0][1]],
            [self.top[1][0], self.top[1][1]],
        ]
    }

    /// Top two entries of the third column.
    pub fn column(&self) -> [Fel; 2] {
        [self.top[0][2], self.top[1][2]]
    }

    pub fn with_column(&self, column: [Fel; 2]) -> Mat3 {
        Mat3::from_block(self.block(), column)
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat3::IDENTITY
    }

    pub fn has_identity_block(&self) -> bool {
        self.block() == Mat3::IDENTITY.block()
    }

    pub fn entries_in(&self, field: &Field) -> bool {
        self.top.iter().flatten().all(|&a| field.contains(a))
    }

    pub fn block_det(&self, field: &Field) -> Fel {
        let [[a, b], [c, d]] = self.block();
        field.mul(a, d) + field.mul(b, c)
    }

    pub fn mul(&self, rhs: &Mat3, field: &Field) -> Mat3 {
        let mut top = [[Fel::ZERO; 3]; 2];
        for (i, row) in top.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                let mut acc = if j == 2 { self.top[i][2] } else { Fel::ZERO };
                for k in 0..2 {
                    acc += field.mul(self.top[i][k], rhs.top[k][j]);
                }
                *out = acc;
            }
        }
        Mat3 { top }
    }

    pub fn inverse(&self, field: &Field) -> Result<Mat3> {
        let det = self.block_det(field);
        let det_inv = field.inv(det).map_err(|_| Error::Singular)?;
        let [[a, b], [c, d]] = self.block();
        let inv = [
            [field.mul(d, det_inv), field.mul(b, det_inv)],
            [field.mul(c, det_inv), field.mul(a, det_inv)],
        ];
        let [v0, v1] = self.column();
        // -A^{-1} v, and negation is the identity in characteristic 2
        let w = [
            field.mul(inv[0][0], v0) + field.mul(inv[0][1], v1),
            field.mul(inv[1][0], v0) + field.mul(inv[1][1], v1),
        ];
        Ok(Mat3::from_block(inv, w))
    }

    pub fn pow(&self, mut e: u64, field: &Field) -> Mat3 {
        let mut acc = Mat3::IDENTITY;
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, field);
            }
            base = base.mul(&base, field);
            e >>= 1;
        }
        acc
    }

    /// Row-major concatenation of the entry bit-vectors (big-endian u16 each),
    /// fixed last row included.
    pub fn encode(&self) -> [u8; 18] {
        let mut out = [0u8; 18];
        for i in 0..3 {
            for j in 0..3 {
                let bits = self.entry(i, j).bits().to_be_bytes();
                out[2 * (3 * i + j)] = bits[0];
                out[2 * (3 * i + j) + 1] = bits[1];
            }
        }
        out
    }
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..3 {
            if i > 0 {
                writeln!(f)?;
            }
            write!(
                f,
                "{} {} {}",
                self.entry(i, 0),
                self.entry(i, 1),
                self.entry(i, 2)
            )?;
        }
        Ok(())
    }
}

impl fmt::Debug for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat3[")?;
        for i in 0..2 {
            write!(
                f,
                "[{} {} {}]",
                self.top[i][0], self.top[i][1], self.top[i][2]
            )?;
        }
        write!(f, "]")
    }
}
