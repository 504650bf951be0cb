use super::buffer::ImageBuffer;

/// RGB in `[0,1]` to `(h, s, v)` with hue in `[0, 1)`.
pub fn rgb_to_hsv([r, g, b]: [f64; 3]) -> [f64; 3] {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let v = max;
    let s = if max > 0.0 { delta / max } else { 0.0 };
    if delta == 0.0 {
        return [0.0, s, v];
    }
    let h = if max == r {
        ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        (b - r) / delta + 2.0
    } else {
        (r - g) / delta + 4.0
    };
    [(h / 6.0).rem_euclid(1.0), s, v]
}

pub fn hsv_to_rgb([h, s, v]: [f64; 3]) -> [f64; 3] {
    if s == 0.0 {
        return [v, v, v];
    }
    let h6 = (h.rem_euclid(1.0)) * 6.0;
    let sector = h6.floor();
    let f = h6 - sector;
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    match sector as u8 % 6 {
        0 => [v, t, p],
        1 => [q, v, p],
        2 => [p, v, t],
        3 => [p, q, v],
        4 => [t, p, v],
        _ => [v, p, q],
    }
}

/// Applies `f` to every pixel's HSV triple and converts back.
pub fn map_hsv(img: &ImageBuffer, f: impl Fn([f64; 3]) -> [f64; 3]) -> ImageBuffer {
    let mut out = img.clone();
    for px in out.data_mut().chunks_exact_mut(3) {
        let rgb = [f64::from(px[0]), f64::from(px[1]), f64::from(px[2])];
        let back = hsv_to_rgb(f(rgb_to_hsv(rgb)));
        for c in 0..3 {
            px[c] = back[c] as f32;
        }
    }
    out.clamp();
    out
}

/// RGB to HSV and back, per pixel.
pub fn rgb_hsv_roundtrip(img: &ImageBuffer) -> ImageBuffer {
    map_hsv(img, |hsv| hsv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_red() {
        assert_eq!(rgb_to_hsv([1.0, 0.0, 0.0]), [0.0, 1.0, 1.0]);
    }

    #[test]
    fn greys_are_achromatic() {
        for g in [0.0, 0.5, 1.0] {
            let [_, s, v] = rgb_to_hsv([g, g, g]);
            assert_eq!(s, 0.0);
            assert_eq!(v, g);
        }
    }

    #[test]
    fn primaries_land_on_sextants() {
        let [h, _, _] = rgb_to_hsv([0.0, 1.0, 0.0]);
        assert!((h - 1.0 / 3.0).abs() < 1e-12);
        let [h, _, _] = rgb_to_hsv([0.0, 0.0, 1.0]);
        assert!((h - 2.0 / 3.0).abs() < 1e-12);
    }
}
