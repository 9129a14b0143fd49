"""The twisted ladder: pairs (2,3) and (3,4) over the default primes."""
import subprocess
import sys
from pathlib import Path

here = Path(__file__).parent
sys.exit(subprocess.call([sys.executable, str(here / "moment_ladder.py"),
                          "--ell", "2,3", "--ell", "3,4", *sys.argv[1:]]))
