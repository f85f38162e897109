//! Certified localization of c-values: winding numbers, Rouché
//! certificates, raster and constructive scans, almost periods.

mod boundary;
pub mod almost;
pub mod construct;
pub mod evaluable;
pub mod rouche;
pub mod scan;

use std::f64::consts::PI;

pub use boundary::{winding_number, Winding, DEFAULT_SEGMENTS};
pub use evaluable::*;

use crate::error::{Error, Result};
use crate::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rectangle {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Rectangle {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Result<Self> {
        if !(sigma_min < sigma_max && t_min < t_max) {
            return Err(Error::Invalid(format!("degenerate rectangle [{sigma_min}, {sigma_max}] x [{t_min}, {t_max}]")));
        }
        Ok(Self { sigma_min, sigma_max, t_min, t_max })
    }

    pub fn width(&self) -> f64 {
        self.sigma_max - self.sigma_min
    }

    pub fn height(&self) -> f64 {
        self.t_max - self.t_min
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.sigma_min + self.sigma_max), 0.5 * (self.t_min + self.t_max))
    }

    /// Quadrants, in reading order.
    pub fn split4(&self) -> [Rectangle; 4] {
        let c = self.center();
        [
            Rectangle { sigma_min: self.sigma_min, sigma_max: c.re, t_min: c.im, t_max: self.t_max },
            Rectangle { sigma_min: c.re, sigma_max: self.sigma_max, t_min: c.im, t_max: self.t_max },
            Rectangle { sigma_min: self.sigma_min, sigma_max: c.re, t_min: self.t_min, t_max: c.im },
            Rectangle { sigma_min: c.re, sigma_max: self.sigma_max, t_min: self.t_min, t_max: c.im },
        ]
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.sigma_min && s.re <= self.sigma_max && s.im >= self.t_min && s.im <= self.t_max
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    Rect(Rectangle),
    Disk { center: Complex64, radius: f64 },
}

impl Region {
    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Invalid(format!("disk radius must be positive, got {radius}")));
        }
        Ok(Region::Disk { center, radius })
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            Region::Rect(r) => 2.0 * (r.width() + r.height()),
            Region::Disk { radius, .. } => 2.0 * PI * radius,
        }
    }

    /// Counter-clockwise boundary point at parameter `u` in `[0, 1]`.
    pub fn point(&self, u: f64) -> Complex64 {
        match self {
            Region::Disk { center, radius } => center + Complex64::from_polar(*radius, 2.0 * PI * u),
            Region::Rect(r) => {
                let (w, h) = (r.width(), r.height());
                let mut d = u.clamp(0.0, 1.0) * self.perimeter();
                if d <= w {
                    return Complex64::new(r.sigma_min + d, r.t_min);
                }
                d -= w;
                if d <= h {
                    return Complex64::new(r.sigma_max, r.t_min + d);
                }
                d -= h;
                if d <= w {
                    return Complex64::new(r.sigma_max - d, r.t_max);
                }
                d -= w;
                Complex64::new(r.sigma_min, (r.t_max - d).max(r.t_min))
            }
        }
    }

    pub fn bbox(&self) -> Rectangle {
        match self {
            Region::Rect(r) => *r,
            Region::Disk { center, radius } => Rectangle {
                sigma_min: center.re - radius,
                sigma_max: center.re + radius,
                t_min: center.im - radius,
                t_max: center.im + radius,
            },
        }
    }

    pub fn center(&self) -> Complex64 {
        match self {
            Region::Rect(r) => r.center(),
            Region::Disk { center, .. } => *center,
        }
    }

    pub fn translated(&self, d: Complex64) -> Region {
        match self {
            Region::Rect(r) => Region::Rect(Rectangle {
                sigma_min: r.sigma_min + d.re,
                sigma_max: r.sigma_max + d.re,
                t_min: r.t_min + d.im,
                t_max: r.t_max + d.im,
            }),
            Region::Disk { center, radius } => Region::Disk { center: center + d, radius: *radius },
        }
    }

    /// True only if the interiors are certainly disjoint.
    pub fn disjoint(&self, other: &Region) -> bool {
        match (self, other) {
            (Region::Disk { center: a, radius: ra }, Region::Disk { center: b, radius: rb }) => (a - b).norm() >= ra + rb,
            _ => {
                let (a, b) = (self.bbox(), other.bbox());
                a.sigma_max <= b.sigma_min || b.sigma_max <= a.sigma_min || a.t_max <= b.t_min || b.t_max <= a.t_min
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparator {
    /// Winding of the function itself.
    Direct,
    /// Finite twisted series from the block construction.
    Cassels,
    /// Local linear model at a refined root.
    Taylor,
}

impl Comparator {
    pub fn as_str(&self) -> &'static str {
        match self {
            Comparator::Direct => "direct",
            Comparator::Cassels => "cassels",
            Comparator::Taylor => "taylor",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Comparator::Direct),
            "cassels" => Ok(Comparator::Cassels),
            "taylor" => Ok(Comparator::Taylor),
            _ => Err(Error::Invalid(format!("unknown comparator {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCertificate {
    pub region: Region,
    pub winding: i64,
    /// Certified lower bound on `|f|` along the boundary.
    pub margin: f64,
    pub comparator: Comparator,
    /// Boundary points used by the winding computation.
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub region: Rectangle,
    pub target: Complex64,
    pub hits: Vec<ZeroCertificate>,
    pub t_max: f64,
    pub count_per_t: f64,
    /// Cells left undecided after subdivision.
    pub indeterminate: Vec<Rectangle>,
    /// Cells certified free of solutions.
    pub zero_free: usize,
    /// Set when the requested strip could not be covered.
    pub certified_strip: Option<Rectangle>,
}

impl ScanReport {
    pub fn empty(region: Rectangle, target: Complex64) -> Self {
        Self {
            region,
            target,
            hits: Vec::new(),
            t_max: region.t_max,
            count_per_t: 0.0,
            indeterminate: Vec::new(),
            zero_free: 0,
            certified_strip: None,
        }
    }

    /// Every cell decided and no solution found.
    pub fn exhaustive(&self) -> bool {
        self.indeterminate.is_empty()
    }

    pub fn pairwise_disjoint(&self) -> bool {
        self.hits.iter().enumerate().all(|(i, a)| self.hits[i + 1..].iter().all(|b| a.region.disjoint(&b.region)))
    }
}
