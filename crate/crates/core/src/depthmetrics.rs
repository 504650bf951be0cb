//! Per-image depth accuracy metrics and the DEE composite.
//!
//! ```
//! use mderobust::depthmetrics::{compute_scores, DepthMap, EvalProtocol};
//!
//! let gt = DepthMap::new(4, 1, vec![1.0, 2.0, 4.0, 8.0]).unwrap();
//! let pred = DepthMap::new(4, 1, vec![1.1, 1.8, 4.4, 8.0]).unwrap();
//! let s = compute_scores(&pred, &gt, &EvalProtocol::unconstrained()).unwrap();
//! assert!((s.abs_rel - 0.075).abs() < 1e-12);
//! assert!((s.dee - 0.0375).abs() < 1e-12);
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Depth raster in meters with a validity mask.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
    valid: Vec<bool>,
}

impl DepthMap {
    /// Marks finite positive values as valid; zeros and NaNs are holes.
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        check_len(width, height, values.len())?;
        let valid = values.iter().map(|&v| v.is_finite() && v > 0.0).collect();
        Ok(DepthMap {
            width,
            height,
            values,
            valid,
        })
    }

    pub fn with_mask(width: usize, height: usize, values: Vec<f64>, valid: Vec<bool>) -> Result<Self> {
        check_len(width, height, values.len())?;
        check_len(width, height, valid.len())?;
        if let Some(i) = (0..values.len()).find(|&i| valid[i] && !(values[i].is_finite() && values[i] > 0.0)) {
            return Err(Error::InvalidDepth(format!(
                "value {} at index {i} is marked valid but is not positive",
                values[i]
            )));
        }
        Ok(DepthMap {
            width,
            height,
            values,
            valid,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn valid(&self) -> &[bool] {
        &self.valid
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    /// Bilinear resize with pixel-center alignment; holes stay out of the blend.
    pub fn resized(&self, w: usize, h: usize) -> DepthMap {
        if (w, h) == (self.width, self.height) {
            return self.clone();
        }
        let sx = self.width as f64 / w as f64;
        let sy = self.height as f64 / h as f64;
        let mut values = vec![0.0; w * h];
        let mut valid = vec![false; w * h];
        for y in 0..h {
            let fy = ((y as f64 + 0.5) * sy - 0.5).clamp(0.0, (self.height - 1) as f64);
            let y0 = fy.floor() as usize;
            let y1 = (y0 + 1).min(self.height - 1);
            let ty = fy - y0 as f64;
            for x in 0..w {
                let fx = ((x as f64 + 0.5) * sx - 0.5).clamp(0.0, (self.width - 1) as f64);
                let x0 = fx.floor() as usize;
                let x1 = (x0 + 1).min(self.width - 1);
                let tx = fx - x0 as f64;
                let mut acc = 0.0;
                let mut weight = 0.0;
                for (xx, yy, wt) in [
                    (x0, y0, (1.0 - tx) * (1.0 - ty)),
                    (x1, y0, tx * (1.0 - ty)),
                    (x0, y1, (1.0 - tx) * ty),
                    (x1, y1, tx * ty),
                ] {
                    let i = yy * self.width + xx;
                    if self.valid[i] && wt > 0.0 {
                        acc += wt * self.values[i];
                        weight += wt;
                    }
                }
                if weight > 0.0 {
                    values[y * w + x] = acc / weight;
                    valid[y * w + x] = true;
                }
            }
        }
        DepthMap {
            width: w,
            height: h,
            values,
            valid,
        }
    }
}

fn check_len(w: usize, h: usize, len: usize) -> Result<()> {
    if w == 0 || h == 0 || len != w * h {
        return Err(Error::Shape(format!("{len} values for a {w}x{h} depth map")));
    }
    Ok(())
}

/// Evaluation crop as fractions of height and width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Crop {
    None,
    Fraction {
        top: f64,
        bottom: f64,
        left: f64,
        right: f64,
    },
}

impl Crop {
    /// The Garg crop used on the KITTI Eigen split.
    pub fn garg() -> Self {
        Crop::Fraction {
            top: 0.408_108_11,
            bottom: 0.991_891_89,
            left: 0.035_947_71,
            right: 0.964_052_29,
        }
    }

    /// The Eigen crop for 480x640 NYU frames.
    pub fn eigen_nyu() -> Self {
        Crop::Fraction {
            top: 45.0 / 480.0,
            bottom: 471.0 / 480.0,
            left: 41.0 / 640.0,
            right: 601.0 / 640.0,
        }
    }

    /// Pixel rectangle `(y0, y1, x0, x1)`, end-exclusive.
    pub fn rect(&self, w: usize, h: usize) -> (usize, usize, usize, usize) {
        match *self {
            Crop::None => (0, h, 0, w),
            Crop::Fraction {
                top,
                bottom,
                left,
                right,
            } => {
                let at = |f: f64, n: usize| ((f * n as f64 + 1e-9) as usize).min(n);
                (at(top, h), at(bottom, h), at(left, w), at(right, w))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalProtocol {
    pub min_depth: f64,
    pub max_depth: f64,
    pub crop: Crop,
    pub median_scaling: bool,
}

impl EvalProtocol {
    pub fn new(min_depth: f64, max_depth: f64, crop: Crop, median_scaling: bool) -> Result<Self> {
        if !(min_depth > 0.0 && min_depth < max_depth) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < min_depth < max_depth, got {min_depth}, {max_depth}"
            )));
        }
        Ok(EvalProtocol {
            min_depth,
            max_depth,
            crop,
            median_scaling,
        })
    }

    /// Outdoor street scenes: 1e-3..80 m, Garg crop, median scaling.
    pub fn kitti() -> Self {
        EvalProtocol {
            min_depth: 1e-3,
            max_depth: 80.0,
            crop: Crop::garg(),
            median_scaling: true,
        }
    }

    /// Indoor scenes: 1e-3..10 m, Eigen crop, no scaling.
    pub fn nyu() -> Self {
        EvalProtocol {
            min_depth: 1e-3,
            max_depth: 10.0,
            crop: Crop::eigen_nyu(),
            median_scaling: false,
        }
    }

    /// No crop, no scaling, a range wide enough to keep every sane value.
    pub fn unconstrained() -> Self {
        EvalProtocol {
            min_depth: 1e-6,
            max_depth: 1e6,
            crop: Crop::None,
            median_scaling: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepthScores {
    pub abs_rel: f64,
    pub sq_rel: f64,
    pub rmse: f64,
    pub rmse_log: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub dee: f64,
}

/// `(abs_rel - d1 + 1) / 2`.
pub fn dee(abs_rel: f64, d1: f64) -> f64 {
    (abs_rel - d1 + 1.0) / 2.0
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    c: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Scores `pred` against `gt` under `proto`.
///
/// A prediction of a different size is resized bilinearly to the ground
/// truth when the aspect ratios agree within 2%.
pub fn compute_scores(pred: &DepthMap, gt: &DepthMap, proto: &EvalProtocol) -> Result<DepthScores> {
    let (w, h) = (gt.width, gt.height);
    let resized;
    let pred = if (pred.width, pred.height) == (w, h) {
        pred
    } else {
        let ra = pred.width as f64 / pred.height as f64;
        let rb = w as f64 / h as f64;
        if (ra / rb - 1.0).abs() > 0.02 {
            return Err(Error::Shape(format!(
                "prediction {}x{} cannot be matched to ground truth {w}x{h}",
                pred.width, pred.height
            )));
        }
        resized = pred.resized(w, h);
        &resized
    };

    let (y0, y1, x0, x1) = proto.crop.rect(w, h);
    let mut pairs = Vec::new();
    for y in y0..y1 {
        for x in x0..x1 {
            let i = y * w + x;
            let g = gt.values[i];
            if !gt.valid[i] || !(g > proto.min_depth && g < proto.max_depth) {
                continue;
            }
            let p = pred.values[i];
            if !pred.valid[i] || !(p.is_finite() && p > 0.0) {
                return Err(Error::InvalidDepth(format!(
                    "prediction {p} at ({x}, {y}) where ground truth is valid"
                )));
            }
            pairs.push((g, p));
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptyEvaluation(
            "no ground-truth pixel inside the crop and depth range".into(),
        ));
    }

    let ratio = if proto.median_scaling {
        median(pairs.iter().map(|p| p.0).collect()) / median(pairs.iter().map(|p| p.1).collect())
    } else {
        1.0
    };

    let mut abs_rel = CompensatedSum::default();
    let mut sq_rel = CompensatedSum::default();
    let mut sq = CompensatedSum::default();
    let mut sq_log = CompensatedSum::default();
    let mut within = [0usize; 3];
    for &(g, p) in &pairs {
        let p = (p * ratio).clamp(proto.min_depth, proto.max_depth);
        let diff = g - p;
        abs_rel.add(diff.abs() / g);
        sq_rel.add(diff * diff / g);
        sq.add(diff * diff);
        sq_log.add((g.ln() - p.ln()).powi(2));
        let thresh = (g / p).max(p / g);
        for (t, slot) in within.iter_mut().enumerate() {
            if thresh < 1.25f64.powi(t as i32 + 1) {
                *slot += 1;
            }
        }
    }
    let n = pairs.len() as f64;
    let abs_rel = abs_rel.value() / n;
    let d1 = within[0] as f64 / n;
    Ok(DepthScores {
        abs_rel,
        sq_rel: sq_rel.value() / n,
        rmse: (sq.value() / n).sqrt(),
        rmse_log: (sq_log.value() / n).sqrt(),
        d1,
        d2: within[1] as f64 / n,
        d3: within[2] as f64 / n,
        dee: dee(abs_rel, d1),
    })
}

/// Per-image mean of every field; `dee` is recomputed from the mean
/// `abs_rel` and `d1`.
pub fn aggregate_set(scores: &[DepthScores]) -> Result<DepthScores> {
    if scores.is_empty() {
        return Err(Error::EmptyEvaluation("no scores to aggregate".into()));
    }
    let n = scores.len() as f64;
    let mean = |f: fn(&DepthScores) -> f64| {
        let mut s = CompensatedSum::default();
        scores.iter().for_each(|x| s.add(f(x)));
        s.value() / n
    };
    let abs_rel = mean(|s| s.abs_rel);
    let d1 = mean(|s| s.d1);
    Ok(DepthScores {
        abs_rel,
        sq_rel: mean(|s| s.sq_rel),
        rmse: mean(|s| s.rmse),
        rmse_log: mean(|s| s.rmse_log),
        d1,
        d2: mean(|s| s.d2),
        d3: mean(|s| s.d3),
        dee: dee(abs_rel, d1),
    })
}
