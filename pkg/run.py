"""
BLIMP NEUROCONTROL TOOLKIT - MAIN ENTRY POINT
=============================================
Usage:
    python run.py evolve --config blimp.toml --seed 7
    python run.py eval --controller pid
    python run.py eval --controller snn --genome results/evolve_snn/best_genome.json --pd
    python run.py compare --pid results/eval/pid_report.json --ann ... --snn ...
    python run.py gen-log --output flight.csv --duration 300
    python run.py sysid --log flight.csv
"""

import sys
from pathlib import Path

# Add backend directory to Python path
backend_dir = Path(__file__).parent / "backend"
sys.path.insert(0, str(backend_dir))

from app.main import cli_main  # noqa: E402

if __name__ == "__main__":
    sys.exit(cli_main())
