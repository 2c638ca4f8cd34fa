use bitvec::prelude::*;

use super::SpaceError;

/// Bits per coordinate for values in `0..=max`: `⌈log₂(max + 1)⌉`.
pub fn code_length_bound(max: u64) -> u32 {
    u64::BITS - max.leading_zeros()
}

pub fn code_length_bound_of(points: &[Vec<u64>]) -> u32 {
    code_length_bound(points.iter().flatten().copied().max().unwrap_or(0))
}

/// Concatenates every coordinate at a fixed width, most significant bit first.
pub fn pack_points(points: &[Vec<u64>], width: u32) -> Result<BitVec<u8, Msb0>, SpaceError> {
    let mut bits = BitVec::<u8, Msb0>::with_capacity(points.iter().map(Vec::len).sum::<usize>() * width as usize);
    for &x in points.iter().flatten() {
        if code_length_bound(x) > width {
            return Err(SpaceError::Width(format!("{x} needs more than {width} bits")));
        }
        for b in (0..width).rev() {
            bits.push((x >> b) & 1 == 1);
        }
    }
    Ok(bits)
}

pub fn unpack_points(
    bits: &BitSlice<u8, Msb0>,
    count: usize,
    dim: usize,
    width: u32,
) -> Result<Vec<Vec<u64>>, SpaceError> {
    let needed = count * dim * width as usize;
    if bits.len() < needed {
        return Err(SpaceError::Width(format!("{} bits, {needed} needed", bits.len())));
    }
    if width == 0 {
        return Ok(vec![vec![0; dim]; count]);
    }
    let mut chunks = bits[..needed].chunks(width as usize);
    Ok((0..count)
        .map(|_| {
            (0..dim)
                .map(|_| chunks.next().expect("length checked").load_be::<u64>())
                .collect()
        })
        .collect())
}
