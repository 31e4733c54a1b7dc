"""
Hall of fame: the best individuals ever evaluated, immune to selection loss.
"""

from typing import Iterable, Iterator, List, Optional

from .operators import EvaluatedIndividual


class HallOfFame:
    """
    Keeps the maxsize lowest-fitness individuals seen so far, ordered by
    (fitness, id). An individual whose parameters equal a member's is not
    inserted twice.
    """

    def __init__(self, maxsize: int, members: Iterable[EvaluatedIndividual] = ()):
        if maxsize < 1:
            raise ValueError(f"Hall of fame size must be >= 1, got {maxsize}")
        self.maxsize = maxsize
        self.members: List[EvaluatedIndividual] = sorted(members, key=lambda m: m.sort_key)[:maxsize]

    def update(self, individuals: Iterable[EvaluatedIndividual]) -> None:
        for candidate in sorted(individuals, key=lambda m: m.sort_key):
            if len(self.members) >= self.maxsize and candidate.sort_key >= self.members[-1].sort_key:
                # sorted input: nobody after this one qualifies either
                break
            if any(m.genome.same_parameters(candidate.genome) for m in self.members):
                continue
            self.members.append(candidate)
            self.members.sort(key=lambda m: m.sort_key)
            del self.members[self.maxsize:]

    @property
    def best(self) -> Optional[EvaluatedIndividual]:
        return self.members[0] if self.members else None

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[EvaluatedIndividual]:
        return iter(self.members)
