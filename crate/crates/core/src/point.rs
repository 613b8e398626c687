use std::ops::{Add, Index, Mul, Sub};

/// A point in `D`-dimensional Euclidean space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<const D: usize>(pub [f64; D]);

pub type Point2 = Point<2>;
pub type Point3 = Point<3>;

impl<const D: usize> Point<D> {
    pub const ZERO: Self = Point([0.0; D]);

    pub fn coords(&self) -> &[f64; D] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// `(1 - s) self + s other`
    pub fn lerp(self, other: Self, s: f64) -> Self {
        self * (1.0 - s) + other * s
    }

    pub fn dot(self, other: Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Distance from `self` to the closed segment `[a, b]`.
    pub fn distance_to_segment(self, a: Self, b: Self) -> f64 {
        let ab = b - a;
        let len2 = ab.dot(ab);
        if len2 == 0.0 {
            return self.distance(a);
        }
        let s = ((self - a).dot(ab) / len2).clamp(0.0, 1.0);
        self.distance(a + ab * s)
    }
}

impl<const D: usize> From<[f64; D]> for Point<D> {
    fn from(coords: [f64; D]) -> Self {
        Point(coords)
    }
}

impl<const D: usize> Index<usize> for Point<D> {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<const D: usize> Add for Point<D> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Point(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl<const D: usize> Sub for Point<D> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Point(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl<const D: usize> Mul<f64> for Point<D> {
    type Output = Self;

    fn mul(self, rhs: f64) -> Self {
        Point(self.0.map(|c| c * rhs))
    }
}

/// `Σ weights[i] · points[i]`, accumulated left to right.
pub(crate) fn combine<const D: usize>(points: &[Point<D>], weights: &[f64]) -> Point<D> {
    points
        .iter()
        .zip(weights)
        .fold(Point::ZERO, |acc, (&p, &w)| acc + p * w)
}
