"""Static SVG rendering of dip curves."""
from datetime import datetime
import logging
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np

from src.models.model import DipCurve

logger = logging.getLogger(__name__)

# fixed element ids keep repeated renders byte-identical
matplotlib.rcParams['svg.hashsalt'] = 'homdip'

def render_dip(curve: DipCurve, path: str, oracle: np.ndarray | None = None, title: str = '', timestamp: bool = False) -> None:
    taus_ps = curve.taus * 1e12

    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(taus_ps, curve.probabilities, '-', label='quadrature')
    if oracle is not None:
        ax.plot(taus_ps, oracle, '--', label='closed form')
    ax.set_xlabel('Delay τ (ps)')
    ax.set_ylabel('Coincidence probability')
    ax.set_title(title or curve.scenario_descriptor)
    ax.set_ylim(bottom=min(0.0, float(np.min(curve.probabilities))) - 0.02)
    ax.grid(True)
    ax.legend()
    fig.tight_layout()

    metadata = {'Date': datetime.now().isoformat() if timestamp else None}
    fig.savefig(path, format='svg', metadata=metadata)
    plt.close(fig)
    logger.info('Wrote %s', path)
