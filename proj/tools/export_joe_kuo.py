"""Write the Joe-Kuo new-joe-kuo-6.21201 direction numbers in their published
text layout, using the copy bundled with scipy."""
import pathlib
import sys

import numpy as np
import scipy.stats


def main(out_path: str) -> None:
    npz = pathlib.Path(scipy.stats.__file__).parent / "_sobol_direction_numbers.npz"
    table = np.load(npz)
    poly, vinit = table["poly"], table["vinit"]
    lines = ["d       s       a       m_i"]
    # row 0 is the van der Corput dimension, which the format leaves implicit
    for d in range(1, len(poly)):
        p = int(poly[d])
        s = p.bit_length() - 1
        a = (p >> 1) & ((1 << (s - 1)) - 1) if s > 1 else 0
        m = " ".join(str(int(v)) for v in vinit[d, :s])
        lines.append(f"{d + 1}       {s}       {a}       {m} ")
    pathlib.Path(out_path).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/new-joe-kuo-6.21201")
