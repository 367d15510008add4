//! Minimal-parenthesis rendering that re-parses to the same tree.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{BinaryOp, Expression};

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn level(expr: &Expression) -> u8 {
    match expr {
        Expression::Binary { op, .. } => match op {
            BinaryOp::Add | BinaryOp::Sub => SUM,
            BinaryOp::Mul | BinaryOp::Div => PRODUCT,
            BinaryOp::Pow => POWER,
        },
        Expression::Negate(_) => UNARY,
        Expression::Number(_) | Expression::Symbol(_) | Expression::Apply { .. } => ATOM,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, expr: &Expression, min: u8) -> fmt::Result {
    if level(expr) < min {
        write!(f, "({expr})")
    } else {
        write!(f, "{expr}")
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Number(value) => f.write_str(&format_number(value)),
            Expression::Symbol(name) => f.write_str(name),
            Expression::Negate(child) => {
                f.write_str("-")?;
                write_at(f, child, UNARY)
            }
            Expression::Binary { op, left, right } => match op {
                BinaryOp::Add | BinaryOp::Sub => {
                    write_at(f, left, SUM)?;
                    write!(f, " {} ", op.symbol())?;
                    write_at(f, right, PRODUCT)
                }
                BinaryOp::Mul | BinaryOp::Div => {
                    write_at(f, left, PRODUCT)?;
                    write!(f, "{}", op.symbol())?;
                    write_at(f, right, UNARY)
                }
                BinaryOp::Pow => {
                    write_at(f, left, ATOM)?;
                    f.write_str("^")?;
                    write_at(f, right, UNARY)
                }
            },
            Expression::Apply { function, args } => {
                write!(f, "{function}(")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Renders a literal as a decimal when it has a finite non-negative decimal
/// expansion, otherwise as a parenthesised quotient.
pub(crate) fn format_number(value: &BigRational) -> String {
    if let Some(text) = terminating_decimal(value) {
        if !value.is_negative() {
            return text;
        }
    }
    if value.denom().is_one() {
        format!("({})", value.numer())
    } else {
        format!("({}/{})", value.numer(), value.denom())
    }
}

fn terminating_decimal(value: &BigRational) -> Option<String> {
    let mut den = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = value.numer() * BigInt::from(10).pow(places) / value.denom();
    let sign = if scaled.sign() == Sign::Minus {
        "-"
    } else {
        ""
    };
    let digits = scaled.magnitude().to_string();
    if places == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let places = places as usize;
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = padded.split_at(padded.len() - places);
    Some(format!("{sign}{int}.{frac}"))
}
