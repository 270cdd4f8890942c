//! Planar geometry of the square region of interest.

use core::ops::{Add, Mul, Sub};

/// A point (or displacement) in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at heading `theta` (radians, counter-clockwise from +x).
    #[inline]
    pub fn from_heading(theta: f64) -> Self {
        Self::new(libm::cos(theta), libm::sin(theta))
    }

    #[inline]
    pub fn distance_sq(self, other: Point2D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn distance(self, other: Point2D) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Midpoint of the segment `self`-`other`.
    #[inline]
    pub fn midpoint(self, other: Point2D) -> Point2D {
        Point2D::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }

    /// Bit-level equality, distinguishing `0.0` from `-0.0`.
    #[inline]
    pub fn bit_eq(self, other: Point2D) -> bool {
        self.x.to_bits() == other.x.to_bits() && self.y.to_bits() == other.y.to_bits()
    }
}

impl Add for Point2D {
    type Output = Point2D;
    #[inline]
    fn add(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2D {
    type Output = Point2D;
    #[inline]
    fn sub(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2D {
    type Output = Point2D;
    #[inline]
    fn mul(self, k: f64) -> Point2D {
        Point2D::new(self.x * k, self.y * k)
    }
}

/// The square `[0, side] x [0, side]` with its origin at `(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    side: f64,
}

impl Region {
    /// Returns `None` unless `side` is finite and strictly positive.
    pub fn new(side: f64) -> Option<Self> {
        (side.is_finite() && side > 0.0).then_some(Self { side })
    }

    #[inline]
    pub fn side(&self) -> f64 {
        self.side
    }

    #[inline]
    pub fn contains(&self, p: Point2D) -> bool {
        (0.0..=self.side).contains(&p.x) && (0.0..=self.side).contains(&p.y)
    }

    /// Componentwise clamp into the region.
    #[inline]
    pub fn clamp(&self, p: Point2D) -> Point2D {
        Point2D::new(p.x.clamp(0.0, self.side), p.y.clamp(0.0, self.side))
    }

    /// Mirrors each coordinate about the wall it crossed until it lies in
    /// `[0, side]`.
    pub fn reflect(&self, p: Point2D) -> Point2D {
        Point2D::new(reflect_coord(p.x, self.side), reflect_coord(p.y, self.side))
    }

    pub fn center(&self) -> Point2D {
        Point2D::new(self.side / 2.0, self.side / 2.0)
    }
}

fn reflect_coord(mut v: f64, side: f64) -> f64 {
    loop {
        if v < 0.0 {
            v = -v;
        } else if v > side {
            v = 2.0 * side - v;
        } else {
            return v;
        }
    }
}
