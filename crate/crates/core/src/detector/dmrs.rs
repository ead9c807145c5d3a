use num_complex::Complex64;

use super::chanest::ChannelFit;
use super::sss::{check_ssb_grid, sync_obs, CENTRE};
use crate::waveform::sequences::DMRS_LEN;
use crate::waveform::{gen_pbch_dmrs, gen_pss, gen_sss, CellId, ResourceGrid, SsbLayout};
use crate::Result;

/// Recovers the DM-RS index of a demodulated SSB of a known cell.
///
/// PSS and SSS are both known once the cell is, so the phase slope is
/// fitted on them jointly. Each hypothesis is correlated coherently within
/// each OFDM symbol and the symbol magnitudes are summed, which tolerates
/// a phase rotation between symbols.
pub fn identify_ssb_index(grid: &ResourceGrid, cell_id: CellId) -> Result<(u8, f64)> {
    check_ssb_grid(grid)?;
    let mut obs = sync_obs(grid, 0, &gen_pss(cell_id.n2())?);
    obs.extend(sync_obs(grid, 2, &gen_sss(cell_id.n1(), cell_id.n2())?));
    let fit = ChannelFit::fit(&obs);

    let layout = SsbLayout::for_cell(cell_id);
    let z: Vec<(usize, Complex64)> = layout
        .dmrs
        .iter()
        .map(|&(l, k)| (l, fit.derotate(k as f64 - CENTRE, grid.get(l, k))))
        .collect();
    let energy: f64 = z.iter().map(|(_, v)| v.norm_sqr()).sum();
    let norm = (DMRS_LEN as f64 * energy).sqrt();
    let mut best = (0u8, f64::NEG_INFINITY);
    for i in 0..8u8 {
        let r = gen_pbch_dmrs(cell_id, i)?;
        let mut per_symbol = [Complex64::new(0.0, 0.0); 4];
        for ((l, z), r) in z.iter().zip(&r) {
            per_symbol[*l] += z * r.conj();
        }
        let c: f64 = per_symbol.iter().map(|c| c.norm()).sum();
        if c > best.1 {
            best = (i, c);
        }
    }
    let metric = if norm > 0.0 {
        (best.1 / norm).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok((best.0, metric))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{map_ssb, SsbConfig};

    #[test]
    fn every_index_is_recovered() {
        let cell = CellId::from_cell(3).unwrap();
        for i in 0..8 {
            let cfg = SsbConfig {
                i_ssb_bar: i,
                ..SsbConfig::new(cell)
            };
            let (got, m) = identify_ssb_index(&map_ssb(&cfg).unwrap(), cell).unwrap();
            assert_eq!(got, i);
            assert!((m - 1.0).abs() < 1e-6);
        }
    }
}
