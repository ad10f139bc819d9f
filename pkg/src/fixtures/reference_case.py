"""
Reference Case Generator
========================
Builds a synthetic attention dataset whose aggregate statistics match a
published single-paper case study: 736 tweets (31 regular, 210 mentions,
495 retweets), 134 conversational tweeters with 459,018 followers, and a
242-node interaction network with fixed role counts and diameter 6.

Network layout (ids n001..n242):
- n017 is the activist: mentions 66 users, retweets both hubs (out 68),
  is mentioned by 17 feeders (in 17)
- n157 is a mixed hub (in 77, out 5); n167 a retweeted sink hub (in 77)
- every other connected node is within two hops of n017, except two
  three-hop tails hanging off n017; their ends are the only pair six apart
- 27 users only post plain shares and are never addressed

Timeline: activity from 2013-10-20 to 2014-12, nothing in 2015-2016, then
n017 wakes the paper up on 2017-01-05 and writes 16 of the 25 tweets of
that ISO week. The last tweet is on 2017-09-01.

Usage:
    ds = reference_case()
    write_reference_case("data/")
"""

import logging
import random
from dataclasses import replace
from datetime import date, datetime, timedelta, timezone
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from config.settings import DEFAULT_SEED
from src.attention_data.loader import dataset_files
from src.attention_data.models import AttentionDataset, PaperRecord, TweetEvent, UserProfile
from src.attention_data.validation import canonicalize_dataset
from src.engagement.metrics import TweetKind

logger = logging.getLogger(__name__)

ACTIVIST_ID = "n017"
MIXED_HUB_ID = "n157"
SINK_HUB_ID = "n167"
NODE_COUNT = 242

TOTAL_EXPOSURE = 459_018
FILE_PREFIX = "reference_case_"

UTC = timezone.utc
EARLY_PHASE = (datetime(2013, 10, 20, 10, 0, tzinfo=UTC), datetime(2014, 12, 12, 18, 0, tzinfo=UTC))
WAKE_WEEK = (datetime(2017, 1, 5, 9, 0, tzinfo=UTC), datetime(2017, 1, 8, 20, 0, tzinfo=UTC))
LATE_PHASE = (datetime(2017, 1, 10, 8, 0, tzinfo=UTC), datetime(2017, 9, 1, 12, 0, tzinfo=UTC))
EARLY_EVENTS = 300
# Slots of the wake-up week not written by the activist (the activist writes the other 16)
WAKE_WEEK_OTHER_SLOTS = (2, 5, 8, 11, 14, 17, 20, 22, 24)

LINK = "https://t.co/refcase"

# ==================== TEXT POOLS ====================

SNIPPETS = {
    "early": [
        "Com prescrição médica esses remédios são ótimos, estudos que comprovam",
        "Posição da ABESO e da ABRAN sobre inibidores de apetite",
        "Apoie o PL 2431/2011, vote a favor",
        "Audiência pública sobre anorexígenos",
        "Leiam a revisão sobre tratamento farmacológico da obesidade",
    ],
    "wake": [
        "precisamos de ajuda, a Anvisa tem os estudos",
        "como dizem que não existem estudos? A prova está aqui",
        "Bom dia deputado, a Anvisa disse que não há estudos mas temos #PL2431_11",
    ],
    "late": [
        "Para ler: tratamento farmacológico da obesidade #PL2431_11 #LEI_13454",
        "O projeto levou 7 anos. Agora é lei #PL2431_11 #LEI_13454",
        "Inibidores de apetite com prescrição médica #LEI_13454",
    ],
}

SHARER_BIOS = {
    "personal": [
        "Amo minha vida e minha família",
        "Mãe de três filhos, casada e feliz",
        "Casada, mãe, amo meus filhos",
        "Vida de mãe é a melhor vida",
        "Amo Deus, amo minha família",
    ],
    "political": [
        "Sou contra a esquerda",
        "Odeio a esquerda, CPI já",
        "Direita conservadora, Brasil acima de tudo",
        "Contra a corrupção, CPI já",
    ],
    "militancy": [
        "Quero inibidores de apetite de volta",
        "Luta contra a obesidade, quero inibidores de apetite de volta",
        "Obesidade é doença, sibutramina com prescrição",
    ],
}

# A few professional bios so user typing has more than one class
PROFESSIONAL_BIOS = [
    "Médico endocrinologista, luta contra a obesidade",
    "Pesquisador em obesidade e metabolismo",
    "Jornalista de saúde",
]

MENTIONED_BIOS = {
    "deputy": [
        "Deputado federal pelo Rio de Janeiro",
        "Deputado federal, Comissão de Saúde",
        "Deputado estadual, defensor da saúde",
    ],
    "senate": [
        "Senador da República",
        "Senador da República, presidente do partido",
        "Presidente do partido",
    ],
    "chamber": [
        "Líder da Câmara Federal, partido",
        "Partido político, perfil oficial",
    ],
    "local": [
        "Prefeito de Campinas",
        "Vice-prefeito de Niterói",
        "Prefeito, gestão municipal",
    ],
}

EdgeSpec = Tuple[str, str, TweetKind]


def _spread(start: datetime, end: datetime, n: int) -> List[datetime]:
    """n timestamps evenly spaced over [start, end], both ends included, whole seconds"""
    if n == 1:
        return [start]
    total = int((end - start).total_seconds())
    return [start + timedelta(seconds=total * i // (n - 1)) for i in range(n)]


class ReferenceCaseBuilder:
    """Deterministic generator for the reference case; `seed` varies followers, bios and event order"""

    def __init__(self, seed: int = DEFAULT_SEED):
        self.seed = seed
        self.rng = random.Random(seed)
        self._assign_roles()

    # ==================== ROLES ====================

    def _assign_roles(self):
        ids = [f"n{i:03d}" for i in range(1, NODE_COUNT + 1)]
        others = [uid for uid in ids if uid not in (ACTIVIST_ID, MIXED_HUB_ID, SINK_HUB_ID)]

        self.mixed_rest = others[0:10]
        self.sources = others[10:132]
        self.sinks = others[132:212]
        self.isolated = others[212:239]

        # b1, b2 are the middle links of the two tails
        self.tail_sources = self.sources[0:2]
        self.feeders = self.sources[2:19]
        self.rest_sources = self.sources[19:122]

        # a1, c1, a2, c2
        self.tail_sinks = self.sinks[0:4]
        self.ring1 = self.sinks[4:58]
        self.ring2 = self.sinks[58:80]

    @property
    def all_sinks(self) -> List[str]:
        return [SINK_HUB_ID] + self.sinks

    @property
    def conversational_tweeters(self) -> List[str]:
        return [ACTIVIST_ID, MIXED_HUB_ID] + self.mixed_rest + self.sources

    # ==================== EDGES ====================

    def activist_edges(self) -> List[EdgeSpec]:
        a1, _, a2, _ = self.tail_sinks
        edges = [(ACTIVIST_ID, SINK_HUB_ID, TweetKind.RETWEET), (ACTIVIST_ID, MIXED_HUB_ID, TweetKind.RETWEET)]
        # ring1 first: the wake-up week draws on the earliest mentions
        for target in self.ring1 + self.mixed_rest + [a1, a2]:
            edges.append((ACTIVIST_ID, target, TweetKind.MENTION))
        return edges

    def hub_edges(self) -> List[EdgeSpec]:
        """Retweets of the two hubs"""
        to_sink_hub = [(s, SINK_HUB_ID, TweetKind.RETWEET) for s in self.rest_sources[0:76]]
        to_mixed_hub = [(s, MIXED_HUB_ID, TweetKind.RETWEET) for s in self.rest_sources[27:103]]
        return to_sink_hub + to_mixed_hub

    def other_edges(self) -> List[Tuple[str, str]]:
        a1, c1, a2, c2 = self.tail_sinks
        b1, b2 = self.tail_sources
        pairs = [(f, ACTIVIST_ID) for f in self.feeders]
        pairs += [(b1, a1), (b1, c1), (b2, a2), (b2, c2)]
        pairs += [(MIXED_HUB_ID, t) for t in self.ring2[0:5]]
        pairs += [(self.mixed_rest[j % 10], self.ring2[5 + j]) for j in range(17)]

        ring = self.ring1 + self.ring2
        for i, source in enumerate(self.feeders + self.rest_sources):
            for j in range(3 if i < 68 else 2):
                pairs.append((source, ring[(i + j) % len(ring)]))
        return pairs

    def edges(self) -> List[EdgeSpec]:
        """One spec per distinct edge; 66 + 144 mentions, the rest retweets"""
        others = self.other_edges()
        typed = [(u, v, TweetKind.MENTION if k < 144 else TweetKind.RETWEET) for k, (u, v) in enumerate(others)]
        return self.activist_edges() + self.hub_edges() + typed

    def repeat_retweets(self) -> List[EdgeSpec]:
        """Second retweets on existing hub edges"""
        return self.hub_edges()[:134]

    def regular_authors(self) -> List[str]:
        return self.isolated + self.isolated[0:4]

    # ==================== PROFILES ====================

    def _followers(self) -> Dict[str, int]:
        counts = {uid: self.rng.randint(2000, 3000) for uid in self.conversational_tweeters if uid != ACTIVIST_ID}
        counts[ACTIVIST_ID] = TOTAL_EXPOSURE - sum(counts.values())
        return counts

    def _sharer_bio(self, i: int) -> str:
        if i < len(PROFESSIONAL_BIOS):
            return PROFESSIONAL_BIOS[i]
        pools = list(SHARER_BIOS.values())
        main = pools[i % len(pools)]
        bio = main[(i // len(pools)) % len(main)]
        if self.rng.random() < 0.4:
            extra = self.rng.choice(pools)
            bio = f"{bio} | {self.rng.choice(extra)}"
        return bio

    def _mentioned_bio(self, i: int) -> str:
        pools = list(MENTIONED_BIOS.values())
        main = pools[i % len(pools)]
        return main[(i // len(pools)) % len(main)]

    def profiles(self) -> Dict[str, UserProfile]:
        followers = self._followers()
        with_bio = set(self.mixed_rest) | {ACTIVIST_ID, MIXED_HUB_ID}
        with_bio |= set(self.rng.sample(self.sources, 73))

        profiles: Dict[str, UserProfile] = {}
        bio_index = 0
        for uid in sorted(self.conversational_tweeters):
            bio = None
            if uid == ACTIVIST_ID:
                bio = "Mãe, casada, quero inibidores de apetite de volta! Sou contra a esquerda"
            elif uid in with_bio:
                bio = self._sharer_bio(bio_index)
                bio_index += 1
            profiles[uid] = UserProfile(uid, f"user_{uid}", bio, followers[uid], "pt")

        no_bio = set(self.ring2[12:22])
        for i, uid in enumerate(sorted(self.all_sinks)):
            bio = None if uid in no_bio else self._mentioned_bio(i)
            profiles[uid] = UserProfile(uid, f"user_{uid}", bio, self.rng.randint(5000, 90000), "pt")
        return profiles

    # ==================== EVENTS ====================

    @staticmethod
    def _event(author: str, target: Optional[str], kind: TweetKind, ts: datetime, phase: str, k: int) -> TweetEvent:
        pool = SNIPPETS[phase]
        snippet = pool[k % len(pool)]
        if kind is TweetKind.RETWEET:
            return TweetEvent("", author, ts, f"RT @user_{target}: {snippet} {LINK}",
                              retweet_of_user_id=target, is_retweet_flag=True)
        if kind is TweetKind.MENTION:
            return TweetEvent("", author, ts, f"@user_{target} {snippet} {LINK}",
                              mentioned_user_ids=(target,))
        return TweetEvent("", author, ts, f"{snippet} {LINK}")

    def events(self) -> List[TweetEvent]:
        activist = self.activist_edges()
        # the 16 wake-week tweets are the first ring1 mentions
        wake_activist = activist[2:18]
        repeats = self.repeat_retweets()
        wake_others = repeats[0:9]

        wake_specs: List[Tuple[str, Optional[str], TweetKind]] = []
        mine, theirs = iter(wake_activist), iter(wake_others)
        for slot in range(25):
            wake_specs.append(next(theirs) if slot in WAKE_WEEK_OTHER_SLOTS else next(mine))

        rest: List[Tuple[str, Optional[str], TweetKind]] = activist[0:2] + activist[18:]
        rest += self.hub_edges() + self.edges()[len(activist) + len(self.hub_edges()):]
        rest += repeats[9:]
        rest += [(uid, None, TweetKind.REGULAR) for uid in self.regular_authors()]
        self.rng.shuffle(rest)

        early, late = rest[:EARLY_EVENTS], rest[EARLY_EVENTS:]
        timed = []
        for phase, specs, (start, end) in (("early", early, EARLY_PHASE), ("wake", wake_specs, WAKE_WEEK),
                                           ("late", late, LATE_PHASE)):
            for k, ((author, target, kind), ts) in enumerate(zip(specs, _spread(start, end, len(specs)))):
                timed.append(self._event(author, target, kind, ts, phase, k))

        return [replace(ev, event_id=f"e{i:04d}") for i, ev in enumerate(timed, 1)]

    def build(self) -> AttentionDataset:
        paper = PaperRecord(
            paper_id="reference-case",
            title="Drug treatment of obesity: a review (reference case)",
            publication_date=date(2002, 10, 1),
            date_precision="month",
        )
        # profiles first: follower draws must not depend on event shuffling
        profiles = self.profiles()
        ds = AttentionDataset(paper=paper, events=tuple(self.events()), profiles=profiles)
        logger.debug("Reference case: %d events, %d profiles", len(ds.events), len(ds.profiles))
        return canonicalize_dataset(ds)


def reference_case(seed: int = DEFAULT_SEED) -> AttentionDataset:
    return ReferenceCaseBuilder(seed).build()


def reference_case_files(seed: int = DEFAULT_SEED, fmt: str = "jsonl") -> Dict[str, bytes]:
    """{file name: bytes} with the reference_case_ prefix"""
    return {FILE_PREFIX + name: data for name, data in dataset_files(reference_case(seed), fmt).items()}


def write_reference_case(directory, seed: int = DEFAULT_SEED, fmt: str = "jsonl") -> Dict[str, Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name, data in reference_case_files(seed, fmt).items():
        path = out / name
        path.write_bytes(data)
        paths[name[len(FILE_PREFIX):].split(".")[0]] = path
    logger.info("Wrote reference case to %s", out)
    return paths
