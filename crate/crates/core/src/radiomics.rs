//! Gray-level discretization, GLDM and GLSZM texture matrices, and the
//! four closed-form radiomic features (SVR, SDHGLE, SDLGE, Zone
//! Variance). All neighborhoods are 26-connected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_N_BINS: u32 = 32;
pub const DEFAULT_GLDM_ALPHA: u32 = 0;

/// A 3-D intensity grid with a binary nodule mask and voxel spacing in mm.
/// Grids are stored x-fastest.
#[derive(Debug, Clone)]
pub struct LabeledVolume {
    pub dims: (usize, usize, usize),
    pub spacing: (f64, f64, f64),
    pub intensities: Vec<f64>,
    pub mask: Vec<bool>,
}

impl LabeledVolume {
    pub fn new(
        dims: (usize, usize, usize),
        spacing: (f64, f64, f64),
        intensities: Vec<f64>,
        mask: Vec<bool>,
    ) -> Result<LabeledVolume> {
        let count = dims.0 * dims.1 * dims.2;
        if dims.0 == 0 || dims.1 == 0 || dims.2 == 0 {
            return Err(Error::Volume("dimensions must be positive".into()));
        }
        if intensities.len() != count || mask.len() != count {
            return Err(Error::Volume(format!(
                "grid size mismatch: dims give {count}, intensities {}, mask {}",
                intensities.len(),
                mask.len()
            )));
        }
        if spacing.0 <= 0.0 || spacing.1 <= 0.0 || spacing.2 <= 0.0 {
            return Err(Error::Volume("spacing components must be positive".into()));
        }
        if !mask.iter().any(|&m| m) {
            return Err(Error::Volume("mask has no voxels".into()));
        }
        if intensities.iter().any(|v| !v.is_finite()) {
            return Err(Error::Volume("non-finite intensity".into()));
        }
        Ok(LabeledVolume {
            dims,
            spacing,
            intensities,
            mask,
        })
    }

    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.dims.0 * (y + self.dims.1 * z)
    }
}

/// On-disk header for the raw volume format: a JSON descriptor next to
/// little-endian f64 intensity data and a byte mask.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VolumeHeader {
    pub version: u32,
    pub dims: [usize; 3],
    pub spacing: [f64; 3],
    pub data: String,
    pub mask: String,
    pub value_type: String,
}

/// Load a volume from its JSON header; data and mask paths are resolved
/// relative to the header file.
pub fn load_volume(header_path: &Path) -> Result<LabeledVolume> {
    let text = std::fs::read_to_string(header_path)
        .map_err(|e| Error::Volume(format!("{}: {e}", header_path.display())))?;
    let header: VolumeHeader = serde_json::from_str(&text)?;
    if header.value_type != "f64-le" {
        return Err(Error::Volume(format!(
            "unsupported value type '{}'",
            header.value_type
        )));
    }
    let dir = header_path.parent().unwrap_or_else(|| Path::new("."));
    let data_bytes = std::fs::read(dir.join(&header.data))?;
    let mask_bytes = std::fs::read(dir.join(&header.mask))?;
    let count = header.dims[0] * header.dims[1] * header.dims[2];
    if data_bytes.len() != count * 8 {
        return Err(Error::Volume(format!(
            "data file holds {} bytes, expected {}",
            data_bytes.len(),
            count * 8
        )));
    }
    if mask_bytes.len() != count {
        return Err(Error::Volume(format!(
            "mask file holds {} bytes, expected {count}",
            mask_bytes.len()
        )));
    }
    let intensities: Vec<f64> = data_bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let mask: Vec<bool> = mask_bytes.iter().map(|&b| b != 0).collect();
    LabeledVolume::new(
        (header.dims[0], header.dims[1], header.dims[2]),
        (header.spacing[0], header.spacing[1], header.spacing[2]),
        intensities,
        mask,
    )
}

/// Write a volume as header + raw data + mask files.
pub fn save_volume(v: &LabeledVolume, header_path: &Path) -> Result<()> {
    let stem = header_path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("volume");
    let data_name = format!("{stem}.data.bin");
    let mask_name = format!("{stem}.mask.bin");
    let header = VolumeHeader {
        version: 1,
        dims: [v.dims.0, v.dims.1, v.dims.2],
        spacing: [v.spacing.0, v.spacing.1, v.spacing.2],
        data: data_name.clone(),
        mask: mask_name.clone(),
        value_type: "f64-le".into(),
    };
    let dir = header_path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::write(header_path, serde_json::to_string_pretty(&header)?)?;
    let mut data = Vec::with_capacity(v.intensities.len() * 8);
    for value in &v.intensities {
        data.extend_from_slice(&value.to_le_bytes());
    }
    std::fs::write(dir.join(data_name), data)?;
    let mask: Vec<u8> = v.mask.iter().map(|&m| u8::from(m)).collect();
    std::fs::write(dir.join(mask_name), mask)?;
    Ok(())
}

/// A discretized volume: gray levels 1..=n_bins inside the mask, 0 outside.
#[derive(Debug, Clone)]
pub struct BinnedVolume {
    pub dims: (usize, usize, usize),
    pub levels: Vec<u32>,
    pub mask: Vec<bool>,
    pub n_bins: u32,
}

impl BinnedVolume {
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.dims.0 * (y + self.dims.1 * z)
    }
}

/// Equal-width binning of the masked intensities into 1..=n_bins; the
/// minimum maps to 1 and the maximum to n_bins. A constant region maps
/// entirely to bin 1.
pub fn discretize(v: &LabeledVolume, n_bins: u32) -> Result<BinnedVolume> {
    if n_bins == 0 {
        return Err(Error::Volume("n_bins must be at least 1".into()));
    }
    let masked: Vec<f64> = v
        .intensities
        .iter()
        .zip(&v.mask)
        .filter(|(_, &m)| m)
        .map(|(&i, _)| i)
        .collect();
    let min = masked.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = masked.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = (max - min) / n_bins as f64;
    let levels: Vec<u32> = v
        .intensities
        .iter()
        .zip(&v.mask)
        .map(|(&value, &m)| {
            if !m {
                0
            } else if width == 0.0 {
                1
            } else {
                let bin = ((value - min) / width).floor() as i64 + 1;
                bin.clamp(1, n_bins as i64) as u32
            }
        })
        .collect();
    Ok(BinnedVolume {
        dims: v.dims,
        levels,
        mask: v.mask.clone(),
        n_bins,
    })
}

const NEIGHBORS_26: [(i64, i64, i64); 26] = {
    let mut out = [(0i64, 0i64, 0i64); 26];
    let mut idx = 0;
    let mut dz = -1i64;
    while dz <= 1 {
        let mut dy = -1i64;
        while dy <= 1 {
            let mut dx = -1i64;
            while dx <= 1 {
                if dx != 0 || dy != 0 || dz != 0 {
                    out[idx] = (dx, dy, dz);
                    idx += 1;
                }
                dx += 1;
            }
            dy += 1;
        }
        dz += 1;
    }
    out
};

/// Gray Level Dependence Matrix: counts indexed by (gray level, dependence),
/// where dependence is 1 plus the number of masked 26-neighbors within the
/// intensity tolerance alpha. Entries sum to the masked voxel count.
#[derive(Debug, Clone, PartialEq)]
pub struct GldmMatrix {
    pub n_levels: u32,
    pub max_dependence: u32,
    /// counts[(level-1) * max_dependence + (dependence-1)]
    pub counts: Vec<u64>,
}

impl GldmMatrix {
    pub fn count(&self, level: u32, dependence: u32) -> u64 {
        self.counts[((level - 1) * self.max_dependence + (dependence - 1)) as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn gldm(b: &BinnedVolume, alpha: u32) -> GldmMatrix {
    let (nx, ny, nz) = b.dims;
    let mut cells: Vec<(u32, u32)> = Vec::new();
    let mut max_level = 0;
    let mut max_dep = 0;
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let i = b.index(x, y, z);
                if !b.mask[i] {
                    continue;
                }
                let level = b.levels[i];
                let mut dependence = 1u32;
                for (dx, dy, dz) in NEIGHBORS_26 {
                    let (jx, jy, jz) = (x as i64 + dx, y as i64 + dy, z as i64 + dz);
                    if jx < 0 || jy < 0 || jz < 0 {
                        continue;
                    }
                    let (jx, jy, jz) = (jx as usize, jy as usize, jz as usize);
                    if jx >= nx || jy >= ny || jz >= nz {
                        continue;
                    }
                    let j = b.index(jx, jy, jz);
                    if b.mask[j] && b.levels[j].abs_diff(level) <= alpha {
                        dependence += 1;
                    }
                }
                max_level = max_level.max(level);
                max_dep = max_dep.max(dependence);
                cells.push((level, dependence));
            }
        }
    }
    let mut counts = vec![0u64; (max_level * max_dep) as usize];
    for (level, dependence) in cells {
        counts[((level - 1) * max_dep + (dependence - 1)) as usize] += 1;
    }
    GldmMatrix {
        n_levels: max_level,
        max_dependence: max_dep,
        counts,
    }
}

/// Gray Level Size Zone Matrix: counts indexed by (gray level, zone size),
/// zones being maximal 26-connected components of equal level within the
/// mask. Sum of count * size equals the masked voxel count.
#[derive(Debug, Clone, PartialEq)]
pub struct GlszmMatrix {
    pub n_levels: u32,
    pub max_zone_size: usize,
    /// counts[(level-1) * max_zone_size + (size-1)]
    pub counts: Vec<u64>,
}

impl GlszmMatrix {
    pub fn count(&self, level: u32, size: usize) -> u64 {
        self.counts[(level as usize - 1) * self.max_zone_size + (size - 1)]
    }

    pub fn total_zones(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn total_voxels(&self) -> u64 {
        let mut total = 0;
        for level in 0..self.n_levels as usize {
            for size in 0..self.max_zone_size {
                total += self.counts[level * self.max_zone_size + size] * (size as u64 + 1);
            }
        }
        total
    }
}

pub fn glszm(b: &BinnedVolume) -> GlszmMatrix {
    let (nx, ny, nz) = b.dims;
    let total = nx * ny * nz;
    let mut visited = vec![false; total];
    let mut zones: Vec<(u32, usize)> = Vec::new();
    let mut stack = Vec::new();
    for start in 0..total {
        if !b.mask[start] || visited[start] {
            continue;
        }
        let level = b.levels[start];
        let mut size = 0usize;
        visited[start] = true;
        stack.push(start);
        while let Some(i) = stack.pop() {
            size += 1;
            let x = i % nx;
            let y = (i / nx) % ny;
            let z = i / (nx * ny);
            for (dx, dy, dz) in NEIGHBORS_26 {
                let (jx, jy, jz) = (x as i64 + dx, y as i64 + dy, z as i64 + dz);
                if jx < 0 || jy < 0 || jz < 0 {
                    continue;
                }
                let (jx, jy, jz) = (jx as usize, jy as usize, jz as usize);
                if jx >= nx || jy >= ny || jz >= nz {
                    continue;
                }
                let j = b.index(jx, jy, jz);
                if b.mask[j] && !visited[j] && b.levels[j] == level {
                    visited[j] = true;
                    stack.push(j);
                }
            }
        }
        zones.push((level, size));
    }
    let max_level = zones.iter().map(|&(l, _)| l).max().unwrap_or(0);
    let max_size = zones.iter().map(|&(_, s)| s).max().unwrap_or(0);
    let mut counts = vec![0u64; max_level as usize * max_size];
    for (level, size) in zones {
        counts[(level as usize - 1) * max_size + (size - 1)] += 1;
    }
    GlszmMatrix {
        n_levels: max_level,
        max_zone_size: max_size,
        counts,
    }
}

/// Surface-to-volume ratio in 1/mm: volume is voxel count times voxel
/// volume; surface sums the areas of voxel faces whose neighbor across the
/// face is outside the mask or the grid.
pub fn surface_volume_ratio(v: &LabeledVolume) -> f64 {
    let (nx, ny, nz) = v.dims;
    let (sx, sy, sz) = v.spacing;
    let face_areas = [sy * sz, sy * sz, sx * sz, sx * sz, sx * sy, sx * sy];
    let offsets: [(i64, i64, i64); 6] = [
        (-1, 0, 0),
        (1, 0, 0),
        (0, -1, 0),
        (0, 1, 0),
        (0, 0, -1),
        (0, 0, 1),
    ];
    let mut voxels = 0u64;
    let mut surface = 0.0;
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                if !v.mask[v.index(x, y, z)] {
                    continue;
                }
                voxels += 1;
                for (face, (dx, dy, dz)) in offsets.iter().enumerate() {
                    let (jx, jy, jz) = (x as i64 + dx, y as i64 + dy, z as i64 + dz);
                    let exposed = jx < 0
                        || jy < 0
                        || jz < 0
                        || jx as usize >= nx
                        || jy as usize >= ny
                        || jz as usize >= nz
                        || !v.mask[v.index(jx as usize, jy as usize, jz as usize)];
                    if exposed {
                        surface += face_areas[face];
                    }
                }
            }
        }
    }
    let volume = voxels as f64 * sx * sy * sz;
    surface / volume
}

/// Small Dependence High Gray Level Emphasis:
/// [sum P(x,y) x^2 / y^2] / sum P(x,y).
pub fn sdhgle(g: &GldmMatrix) -> f64 {
    let mut numerator = 0.0;
    for level in 1..=g.n_levels {
        for dep in 1..=g.max_dependence {
            let count = g.count(level, dep) as f64;
            numerator += count * (level as f64).powi(2) / (dep as f64).powi(2);
        }
    }
    numerator / g.total() as f64
}

/// Small Dependence Low Gray Level Emphasis:
/// [sum P(x,y) / (x^2 y^2)] / sum P(x,y).
pub fn sdlge(g: &GldmMatrix) -> f64 {
    let mut numerator = 0.0;
    for level in 1..=g.n_levels {
        for dep in 1..=g.max_dependence {
            let count = g.count(level, dep) as f64;
            numerator += count / ((level as f64).powi(2) * (dep as f64).powi(2));
        }
    }
    numerator / g.total() as f64
}

/// Zone Variance: variance of zone sizes under the normalized zone
/// distribution p(x,y) = P(x,y) / sum P.
pub fn zone_variance(g: &GlszmMatrix) -> f64 {
    let total = g.total_zones() as f64;
    let mut mean = 0.0;
    for level in 1..=g.n_levels {
        for size in 1..=g.max_zone_size {
            mean += g.count(level, size) as f64 / total * size as f64;
        }
    }
    let mut variance = 0.0;
    for level in 1..=g.n_levels {
        for size in 1..=g.max_zone_size {
            let p = g.count(level, size) as f64 / total;
            variance += p * (size as f64 - mean) * (size as f64 - mean);
        }
    }
    variance
}

#[cfg(test)]
mod tests {
    use super::*;

    fn volume(
        dims: (usize, usize, usize),
        spacing: (f64, f64, f64),
        intensities: Vec<f64>,
    ) -> LabeledVolume {
        let count = dims.0 * dims.1 * dims.2;
        LabeledVolume::new(dims, spacing, intensities, vec![true; count]).unwrap()
    }

    #[test]
    fn discretize_cases() {
        // Constant region: every bin is 1 regardless of n_bins.
        let v = volume((2, 2, 1), (1.0, 1.0, 1.0), vec![4.0; 4]);
        let b = discretize(&v, 32).unwrap();
        assert!(b.levels.iter().all(|&l| l == 1));

        // 0..31 into 32 bins: intensity i lands in bin i+1.
        let v = volume((32, 1, 1), (1.0, 1.0, 1.0), (0..32).map(f64::from).collect());
        let b = discretize(&v, 32).unwrap();
        for (i, &l) in b.levels.iter().enumerate() {
            assert_eq!(l, i as u32 + 1);
        }

        // Single bin.
        let v = volume((3, 1, 1), (1.0, 1.0, 1.0), vec![0.0, 5.0, 9.0]);
        let b = discretize(&v, 1).unwrap();
        assert!(b.levels.iter().all(|&l| l == 1));

        assert!(discretize(&v, 0).is_err());
    }

    #[test]
    fn gldm_hand_enumeration() {
        // 2x2x1 levels [[1,1],[1,2]], alpha 0: P(1,3) = 3, P(2,1) = 1.
        let v = volume((2, 2, 1), (1.0, 1.0, 1.0), vec![1.0, 1.0, 1.0, 2.0]);
        let b = discretize(&v, 2).unwrap();
        assert_eq!(b.levels, vec![1, 1, 1, 2]);
        let g = gldm(&b, 0);
        assert_eq!(g.count(1, 3), 3);
        assert_eq!(g.count(2, 1), 1);
        assert_eq!(g.total(), 4);
    }

    #[test]
    fn gldm_constant_cube() {
        let v = volume((3, 3, 3), (1.0, 1.0, 1.0), vec![7.0; 27]);
        let b = discretize(&v, 8).unwrap();
        let g = gldm(&b, 0);
        assert_eq!(g.n_levels, 1);
        assert_eq!(g.total(), 27);
        // Center voxel has all 26 neighbors in agreement.
        assert_eq!(g.count(1, 27), 1);
    }

    #[test]
    fn glszm_cases() {
        // Constant 2x2x2: one zone of size 8.
        let v = volume((2, 2, 2), (1.0, 1.0, 1.0), vec![3.0; 8]);
        let b = discretize(&v, 4).unwrap();
        let g = glszm(&b);
        assert_eq!(g.count(1, 8), 1);
        assert_eq!(g.total_zones(), 1);
        assert_eq!(g.total_voxels(), 8);

        // 2x2x1 levels [[1,1],[1,2]]: zones (1, size 3) and (2, size 1).
        let v = volume((2, 2, 1), (1.0, 1.0, 1.0), vec![1.0, 1.0, 1.0, 2.0]);
        let b = discretize(&v, 2).unwrap();
        let g = glszm(&b);
        assert_eq!(g.count(1, 3), 1);
        assert_eq!(g.count(2, 1), 1);
        assert_eq!(g.total_voxels(), 4);
    }

    #[test]
    fn svr_worked_examples() {
        // Single 1 mm voxel: cube of side 1 -> 6.0.
        let v = volume((1, 1, 1), (1.0, 1.0, 1.0), vec![0.0]);
        assert!((surface_volume_ratio(&v) - 6.0).abs() < 1e-12);

        // 2x2x2 block: S = 24, V = 8 -> 3.0.
        let v = volume((2, 2, 2), (1.0, 1.0, 1.0), vec![0.0; 8]);
        assert!((surface_volume_ratio(&v) - 3.0).abs() < 1e-12);

        // Scaling spacing by c scales SVR by 1/c.
        let v1 = volume((2, 3, 4), (1.0, 1.0, 1.0), vec![0.0; 24]);
        let v2 = volume((2, 3, 4), (2.5, 2.5, 2.5), vec![0.0; 24]);
        let r1 = surface_volume_ratio(&v1);
        let r2 = surface_volume_ratio(&v2);
        assert!((r1 / r2 - 2.5).abs() < 1e-12);
    }

    #[test]
    fn svr_solid_block_analytic() {
        // Solid a x b x c block at unit spacing: SVR = 2(ab+bc+ca)/(abc).
        for (a, b, c) in [(1usize, 1usize, 1usize), (2, 3, 4), (5, 1, 2)] {
            let v = volume((a, b, c), (1.0, 1.0, 1.0), vec![0.0; a * b * c]);
            let (af, bf, cf) = (a as f64, b as f64, c as f64);
            let expected = 2.0 * (af * bf + bf * cf + cf * af) / (af * bf * cf);
            assert!((surface_volume_ratio(&v) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn gldm_feature_worked_examples() {
        let v = volume((2, 2, 1), (1.0, 1.0, 1.0), vec![1.0, 1.0, 1.0, 2.0]);
        let b = discretize(&v, 2).unwrap();
        let g = gldm(&b, 0);
        // (3 * 1/9 + 1 * 4/1) / 4 = 1.08333...
        assert!((sdhgle(&g) - 1.0833333333).abs() < 1e-5);
        // (3/9 + 1/4) / 4 = 0.14583...
        assert!((sdlge(&g) - 0.1458333333).abs() < 1e-5);

        // Single voxel: both are 1.
        let v1 = volume((1, 1, 1), (1.0, 1.0, 1.0), vec![5.0]);
        let b1 = discretize(&v1, 4).unwrap();
        let g1 = gldm(&b1, 0);
        assert_eq!(sdhgle(&g1), 1.0);
        assert_eq!(sdlge(&g1), 1.0);
    }

    #[test]
    fn gldm_features_scale_invariant() {
        let v = volume((2, 2, 1), (1.0, 1.0, 1.0), vec![1.0, 1.0, 1.0, 2.0]);
        let b = discretize(&v, 2).unwrap();
        let g = gldm(&b, 0);
        let doubled = GldmMatrix {
            n_levels: g.n_levels,
            max_dependence: g.max_dependence,
            counts: g.counts.iter().map(|c| c * 2).collect(),
        };
        assert!((sdhgle(&g) - sdhgle(&doubled)).abs() < 1e-12);
        assert!((sdlge(&g) - sdlge(&doubled)).abs() < 1e-12);
    }

    #[test]
    fn zone_variance_cases() {
        // One zone: variance 0.
        let v = volume((2, 2, 2), (1.0, 1.0, 1.0), vec![3.0; 8]);
        let g = glszm(&discretize(&v, 4).unwrap());
        assert_eq!(zone_variance(&g), 0.0);

        // Zones of sizes 3 and 1: mean 2, variance 1.
        let v = volume((2, 2, 1), (1.0, 1.0, 1.0), vec![1.0, 1.0, 1.0, 2.0]);
        let g = glszm(&discretize(&v, 2).unwrap());
        assert!((zone_variance(&g) - 1.0).abs() < 1e-12);

        let scaled = GlszmMatrix {
            n_levels: g.n_levels,
            max_zone_size: g.max_zone_size,
            counts: g.counts.iter().map(|c| c * 3).collect(),
        };
        assert!((zone_variance(&scaled) - zone_variance(&g)).abs() < 1e-12);
    }

    #[test]
    fn features_invariant_under_axis_permutation() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let dims = (3usize, 4usize, 2usize);
        let count = dims.0 * dims.1 * dims.2;
        let intensities: Vec<f64> = (0..count).map(|_| rng.gen_range(0.0..10.0)).collect();
        let mask: Vec<bool> = (0..count).map(|_| rng.gen_bool(0.8)).collect();
        let mask = if mask.iter().any(|&m| m) { mask } else { vec![true; count] };
        let v = LabeledVolume::new(dims, (1.0, 1.0, 1.0), intensities.clone(), mask.clone())
            .unwrap();
        let b = discretize(&v, 4).unwrap();
        let reference = (
            sdhgle(&gldm(&b, 0)),
            sdlge(&gldm(&b, 0)),
            zone_variance(&glszm(&b)),
            surface_volume_ratio(&v),
        );

        // All six axis orders; isotropic spacing keeps SVR comparable.
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let d = [dims.0, dims.1, dims.2];
        for perm in perms {
            let nd = (d[perm[0]], d[perm[1]], d[perm[2]]);
            let mut pi = vec![0.0; count];
            let mut pm = vec![false; count];
            for z in 0..dims.2 {
                for y in 0..dims.1 {
                    for x in 0..dims.0 {
                        let src = x + dims.0 * (y + dims.1 * z);
                        let coords = [x, y, z];
                        let (px, py, pz) = (coords[perm[0]], coords[perm[1]], coords[perm[2]]);
                        let dst = px + nd.0 * (py + nd.1 * pz);
                        pi[dst] = intensities[src];
                        pm[dst] = mask[src];
                    }
                }
            }
            let pv = LabeledVolume::new(nd, (1.0, 1.0, 1.0), pi, pm).unwrap();
            let pb = discretize(&pv, 4).unwrap();
            assert!((sdhgle(&gldm(&pb, 0)) - reference.0).abs() < 1e-12);
            assert!((sdlge(&gldm(&pb, 0)) - reference.1).abs() < 1e-12);
            assert!((zone_variance(&glszm(&pb)) - reference.2).abs() < 1e-12);
            assert!((surface_volume_ratio(&pv) - reference.3).abs() < 1e-12);
        }
    }

    #[test]
    fn volume_io_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let v = volume((2, 3, 2), (0.5, 1.0, 2.0), (0..12).map(f64::from).collect());
        let header = dir.path().join("nodule.json");
        save_volume(&v, &header).unwrap();
        let back = load_volume(&header).unwrap();
        assert_eq!(back.dims, v.dims);
        assert_eq!(back.spacing, v.spacing);
        assert_eq!(back.intensities, v.intensities);
        assert_eq!(back.mask, v.mask);
    }

    #[test]
    fn volume_validation() {
        assert!(LabeledVolume::new((2, 1, 1), (1.0, 1.0, 1.0), vec![0.0], vec![true]).is_err());
        assert!(
            LabeledVolume::new((1, 1, 1), (0.0, 1.0, 1.0), vec![0.0], vec![true]).is_err()
        );
        assert!(
            LabeledVolume::new((1, 1, 1), (1.0, 1.0, 1.0), vec![0.0], vec![false]).is_err()
        );
    }
}
