""" A finite-stage surrogate of the limsup set ∩_k ∪_{j>=k} F_j

Only a finite window of stages is available: the report is a truncation, and says so.
"""

from __future__ import annotations

import dataclasses
from collections import abc

from schrodloc import exc

from .certificate import Certificate
from .search import EmpiricalSet, wilson_interval

LABEL = 'finite-stage truncation of the limsup set'


@dataclasses.dataclass(frozen=True)
class SetEstimate:
    """ A set of sample indices, as a fraction of the samples with its Wilson interval """
    name: str
    stages: tuple[int, ...]
    count: int
    samples: int
    interval: tuple[float, float]

    # Lebesgue measure of the sampling domain
    domain_measure: float

    @property
    def fraction(self) -> float:
        return self.count / self.samples

    @property
    def measure(self) -> float:
        return self.fraction * self.domain_measure

    def export(self) -> dict:
        return {
            'name': self.name,
            'stages': list(self.stages),
            'count': self.count,
            'samples': self.samples,
            'fraction': self.fraction,
            'interval': list(self.interval),
            'measure': self.measure,
        }


@dataclasses.dataclass(frozen=True)
class LimsupReport:
    # Per stage
    stages: tuple[SetEstimate, ...]

    # Samples passing at every available stage
    intersection: SetEstimate

    # ∪_{j>=k} F_j for each k of the window
    tails: tuple[SetEstimate, ...]

    # Certificates: how many were examined, and how many are valid
    certificates: int
    certified: int

    label: str = LABEL

    def export(self) -> dict:
        return {
            'label': self.label,
            'stages': [s.export() for s in self.stages],
            'intersection': self.intersection.export(),
            'tails': [s.export() for s in self.tails],
            'certificates': self.certificates,
            'certified': self.certified,
        }


def limsup_report(sets: abc.Sequence[EmpiricalSet], certificates: abc.Iterable[Certificate] = (), *,
                  level: float = 0.95) -> LimsupReport:
    """ Intersection and tail unions of the per-stage sets, on their common samples

    Raises:
        exc.InvalidParameterError: no sets, or sets drawn from different samples
    """
    if not sets:
        raise exc.InvalidParameterError('limsup_report needs at least one stage')
    sets = sorted(sets, key=lambda s: s.k)
    samples, seed = sets[0].samples, sets[0].seed
    if any(s.samples != samples or s.seed != seed for s in sets):
        raise exc.InvalidParameterError('limsup_report needs every stage on the same samples (count and seed)')
    domain = sets[0].domain_measure

    def estimate(name: str, stages: abc.Sequence[int], indices: abc.Set[int]) -> SetEstimate:
        return SetEstimate(
            name=name,
            stages=tuple(stages),
            count=len(indices),
            samples=samples,
            interval=wilson_interval(len(indices), samples, level),
            domain_measure=domain,
        )

    per_stage = tuple(estimate(f'F_{s.k}', [s.k], s.passing_indices) for s in sets)

    everywhere = frozenset.intersection(*(s.passing_indices for s in sets))
    intersection = estimate('intersection', [s.k for s in sets], everywhere)

    tails = []
    for j in range(len(sets)):
        window = sets[j:]
        union = frozenset.union(*(s.passing_indices for s in window))
        tails.append(estimate(f'union k>={sets[j].k}', [s.k for s in window], union))

    certificates = list(certificates)
    return LimsupReport(
        stages=per_stage,
        intersection=intersection,
        tails=tuple(tails),
        certificates=len(certificates),
        certified=sum(1 for c in certificates if c.valid),
    )
