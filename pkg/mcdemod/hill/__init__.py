from mcdemod.hill.fit import HillFitConfig, HillParams, fit_grid, fit_hill, hill_eval, hill_target

__all__ = ["HillFitConfig", "HillParams", "fit_grid", "fit_hill", "hill_eval", "hill_target"]
