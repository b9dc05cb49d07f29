from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed

from mcdemod.errors import RunFailedError
from mcdemod.experiments.channel import Channel, RunOutcome, simulate_run

logger = logging.getLogger(__name__)


def run_all(channel: Channel, seed: int, runs: int, workers: int = 1, full: bool = True) -> list[RunOutcome]:
    """``runs`` independent runs per symbol, returned in (symbol, run) order.

    A failing run aborts the experiment with a ``RunFailedError`` naming it.
    """
    keys = [(symbol, run) for symbol in range(channel.K) for run in range(runs)]
    logger.info("%d runs over %d symbols with %d worker(s)", len(keys), channel.K, workers)
    outcomes: list[RunOutcome] = []
    if workers <= 1:
        for symbol, run in keys:
            try:
                outcomes.append(simulate_run(channel, seed, symbol, run, full))
            except Exception as exc:
                raise RunFailedError(symbol, run, exc) from exc
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {
                executor.submit(simulate_run, channel, seed, symbol, run, full): (symbol, run) for symbol, run in keys
            }
            for future in as_completed(futures):
                symbol, run = futures[future]
                try:
                    outcomes.append(future.result())
                except Exception as exc:
                    for pending in futures:
                        pending.cancel()
                    raise RunFailedError(symbol, run, exc) from exc
    return sorted(outcomes, key=lambda outcome: outcome.key)
