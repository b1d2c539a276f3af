"""
Run the edgecc command line from a source checkout.

    python app.py validate --config sample_configs/paper_fig2.cfg --seed 7
"""

from src.cli.main import run

if __name__ == "__main__":
    run()
