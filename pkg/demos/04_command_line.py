# %% [markdown]
# # The same results from the command line
#
# The ``sgdecoherence`` command wraps the library. Here we drive it in-process
# through ``main`` so the script runs anywhere the package is importable.

# %%
import tempfile
from pathlib import Path

from sgdecoherence.cli import main
from sgdecoherence.serialize import read_sweep

tmp = Path(tempfile.mkdtemp())

# %% both figure curves in one call
code = main(["sweep", "--mass", "1e-14", "--separation", "250e-6", "--durations", "5,50",
             "--output", str(tmp / "fig.csv")])
print("exit code", code, "rows", len(read_sweep(tmp / "fig.csv")))

# %% a feasibility report and the constants in use
main(["feasibility", "--duration", "1"])
main(["constants"])

# %% invalid physics is rejected with its own exit code
print("negative mass ->", main(["sweep", "--mass", "-1"]))
