from django.conf import settings

_DEFAULTS = {
    'OUTPUT_DIR': 'outputs',
    'DEFAULT_SEED': 0,
    'BRUTE_FORCE_BUDGET': 1_000_000,
    'RETRY_LIMIT': 1000,
    'WITNESS_BUDGET': 2000,
    'EXHAUSTIVE_WITNESS_LIMIT': 16,
    'CEDER_DIRECTION_BUDGET': 64,
    'CEDER_EXHAUSTIVE_LIMIT': 12,
    'SNAP_DENOMINATOR': 2 ** 16,
    'SPECTRAL_TOLERANCE': 1e-9,
    'MONTE_CARLO_SAMPLES': 4000,
    'GRID_SIZE': 200,
    'RECORD_RUNS': True,
}


def lab_setting(name):
    """Return ``settings.OVERLAP_LAB[name]``, falling back to the shipped default."""
    overrides = getattr(settings, 'OVERLAP_LAB', {})
    if name in overrides:
        return overrides[name]
    return _DEFAULTS[name]


def resolve(value, name):
    """Explicit argument wins over the configured default."""
    return lab_setting(name) if value is None else value
