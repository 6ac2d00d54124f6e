"""Experiment configuration shared by the studies, the Celery tasks and the commands."""
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from overlap_lab.conf import lab_setting
from overlap_lab.exceptions import ValidationProblem


@dataclass(frozen=True)
class ExperimentConfig:
    """Seed, trial count and annealing schedule of one experiment run.

    Temperatures are on the overlap-fraction scale: a move that raises the fraction by
    t is accepted with probability exp(-t / T) at temperature T.
    """

    seed: int = 0
    trials: int = 20
    chains: int = 4
    steps: int = 200
    initial_temperature: float = 0.05
    cooling: float = 0.98
    step_scale: float = 0.15
    candidate_budget: int = 0
    epsilons: tuple = (0.1,)
    exact_limit: int = 40
    threads: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationProblem("the seed must be a 64-bit unsigned integer")
        if self.trials < 1 or self.chains < 1:
            raise ValidationProblem("trials and chains must be at least 1")
        if self.steps < 0:
            raise ValidationProblem("the number of annealing steps cannot be negative")
        if not 0 < self.cooling < 1:
            raise ValidationProblem("the cooling factor must lie in (0, 1)")
        if self.initial_temperature <= 0 or self.step_scale <= 0:
            raise ValidationProblem("temperature and step scale must be positive")
        if self.threads < 1:
            raise ValidationProblem("threads must be at least 1")
        object.__setattr__(self, 'epsilons', tuple(float(e) for e in self.epsilons))

    @classmethod
    def from_options(cls, **options):
        """Build from command options, ignoring unknown keys and unset (None) values."""
        names = {f.name for f in fields(cls)}
        values = {k: v for k, v in options.items() if k in names and v is not None}
        values.setdefault('seed', lab_setting('DEFAULT_SEED'))
        return cls(**values)

    def temperature(self, step):
        return self.initial_temperature * self.cooling ** step

    def spawn_seeds(self, count, salt=0):
        """Independent child seeds; the same (seed, count) always yields the same list."""
        children = np.random.SeedSequence([self.seed, salt]).spawn(count)
        return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]

    def as_dict(self):
        payload = asdict(self)
        payload['epsilons'] = list(self.epsilons)
        return payload
