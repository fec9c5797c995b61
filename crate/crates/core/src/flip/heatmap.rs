//! CSV and PGM renderings of per-node flip statistics.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::chain::FlipStats;
use crate::error::{Error, Result};

/// Per-node flip counts and block occupancies as read back from a heatmap CSV.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeatmapData {
    pub flips: Vec<u64>,
    /// `occupancy[v][b]` = steps node v spent in block b.
    pub occupancy: Vec<Vec<u64>>,
}

impl HeatmapData {
    pub fn from_stats(stats: &FlipStats) -> Self {
        let n = stats.flips.len();
        let k = stats.k.max(1);
        HeatmapData {
            flips: stats.flips.clone(),
            occupancy: (0..n).map(|v| stats.occupancy.get(v * k..(v + 1) * k).map_or(vec![0; k], |s| s.to_vec())).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let k = self.occupancy.first().map_or(0, Vec::len);
        let mut out = String::from("node,flips");
        for b in 0..k {
            let _ = write!(out, ",occupancy_{b}");
        }
        out.push('\n');
        for (v, f) in self.flips.iter().enumerate() {
            let _ = write!(out, "{v},{f}");
            for o in &self.occupancy[v] {
                let _ = write!(out, ",{o}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let bad = |line: usize, message: &str| Error::Schema { location: format!("line {line}"), message: message.into() };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad(1, "missing header"))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 2 || cols[0] != "node" || cols[1] != "flips" {
            return Err(bad(1, "expected header node,flips,occupancy_*"));
        }
        let k = cols.len() - 2;
        let mut data = HeatmapData { flips: Vec::new(), occupancy: Vec::new() };
        for (i, line) in lines.enumerate() {
            let fields: Vec<u64> =
                line.split(',').map(|f| f.trim().parse::<u64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad(i + 2, "non-integer field"))?;
            if fields.len() != k + 2 || fields[0] != data.flips.len() as u64 {
                return Err(bad(i + 2, "wrong field count or node order"));
            }
            data.flips.push(fields[1]);
            data.occupancy.push(fields[2..].to_vec());
        }
        Ok(data)
    }

    /// Steps each node spent in block 1.
    pub fn occupancy_field(&self) -> Vec<u64> {
        self.occupancy.iter().map(|o| o.get(1).copied().unwrap_or(0)).collect()
    }
}

/// Plain-text PGM of `values` with pixel positions given by the rank of each
/// node's x and y coordinate; values are scaled so the maximum maps to 255.
pub fn render_pgm(values: &[u64], coords: &[(f64, f64)]) -> Result<String> {
    if coords.len() != values.len() {
        return Err(Error::InvalidInput("one coordinate per node required".into()));
    }
    let rank = |pick: fn(&(f64, f64)) -> f64| {
        let mut keys: Vec<f64> = coords.iter().map(pick).collect();
        keys.sort_by(f64::total_cmp);
        keys.dedup();
        let pos: Vec<usize> = coords.iter().map(|c| keys.partition_point(|&k| k < pick(c))).collect();
        (keys.len(), pos)
    };
    let (width, xs) = rank(|c| c.0);
    let (height, ys) = rank(|c| c.1);
    let max = values.iter().copied().max().unwrap_or(0);
    let mut pixels = vec![0u64; width * height];
    for (v, &val) in values.iter().enumerate() {
        let scaled = if max == 0 { 0 } else { (val as u128 * 255 / max as u128) as u64 };
        let idx = (height - 1 - ys[v]) * width + xs[v];
        pixels[idx] = pixels[idx].max(scaled);
    }
    let mut out = format!("P2\n{width} {height}\n255\n");
    for row in pixels.chunks(width.max(1)) {
        let line: Vec<String> = row.iter().map(u64::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// Write `heatmap.csv` and, when coordinates are given, `flips.pgm` and
/// `occupancy.pgm` into `dir`. Returns the written paths.
pub fn heatmap_export(stats: &FlipStats, coords: Option<&[(f64, f64)]>, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let data = HeatmapData::from_stats(stats);
    let mut written = Vec::new();
    let csv = dir.join("heatmap.csv");
    fs::write(&csv, data.to_csv())?;
    written.push(csv);
    if let Some(coords) = coords {
        for (name, field) in [("flips.pgm", data.flips.clone()), ("occupancy.pgm", data.occupancy_field())] {
            let path = dir.join(name);
            fs::write(&path, render_pgm(&field, coords)?)?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Read a CSV written by [`heatmap_export`].
pub fn read_heatmap_csv(path: &Path) -> Result<HeatmapData> {
    HeatmapData::parse_csv(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flip::{run_chain, ChainConfig};
    use crate::generators::{grid, initial_partition, InitialSplit};
    use crate::partition::rat;

    #[test]
    fn zero_steps_render_black() {
        let (pg, layout) = grid(3, 2).unwrap();
        let cfg = ChainConfig { lambda: rat(1, 1), ..Default::default() };
        let (_, stats) = run_chain(pg.graph(), &cfg, initial_partition(&layout, InitialSplit::Horizontal)).unwrap();
        let data = HeatmapData::from_stats(&stats);
        assert!(data.flips.iter().all(|&f| f == 0));
        let pgm = render_pgm(&data.flips, &layout).unwrap();
        assert_eq!(pgm, "P2\n3 2\n255\n0 0 0\n0 0 0\n");
        assert!(render_pgm(&data.flips, &layout[1..]).is_err());
    }

    #[test]
    fn csv_round_trip_reproduces_the_images() {
        let (pg, layout) = grid(5, 5).unwrap();
        let cfg = ChainConfig { lambda: rat(1, 2), steps: 20_000, seed: 3, ..Default::default() };
        let (_, stats) = run_chain(pg.graph(), &cfg, initial_partition(&layout, InitialSplit::Diagonal)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let written = heatmap_export(&stats, Some(&layout), dir.path()).unwrap();
        assert_eq!(written.len(), 3);
        let back = read_heatmap_csv(&written[0]).unwrap();
        assert_eq!(back, HeatmapData::from_stats(&stats));
        assert!(back.occupancy.iter().all(|o| o.iter().sum::<u64>() == 20_000));
        assert_eq!(fs::read_to_string(&written[1]).unwrap(), render_pgm(&back.flips, &layout).unwrap());
        assert_eq!(fs::read_to_string(&written[2]).unwrap(), render_pgm(&back.occupancy_field(), &layout).unwrap());
        assert!(HeatmapData::parse_csv("node,flips\n1,0\n").is_err());
    }
}
