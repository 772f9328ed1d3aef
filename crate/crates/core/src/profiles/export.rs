use std::io::Write;

use super::wave::SolitaryWave;

/// CSV with `#` metadata lines and columns `x,v,u,X,Y`, 17 significant digits.
pub fn write_profile_csv(wave: &SolitaryWave, out: &mut impl Write) -> std::io::Result<()> {
    let m = &wave.model;
    writeln!(
        out,
        "# k={}, a={:.16e}, m={:.16e}, omega={:.16e}, gamma={:.16e}, Q={:.16e}",
        m.k, m.a, m.m, wave.omega, wave.gamma, wave.q
    )?;
    writeln!(out, "x,v,u,X,Y")?;
    for j in 0..wave.grid.points() {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            wave.grid.node(j),
            wave.v[j],
            wave.u[j],
            wave.x_field[j],
            wave.y_field[j]
        )?;
    }
    Ok(())
}
