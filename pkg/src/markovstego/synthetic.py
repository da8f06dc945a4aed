"""Seeded toy English generator used as a stand-in desk corpus.

A handful of sentence templates draw words from Zipf-weighted lexicons, which
is enough to give order-2 contexts long-tailed successor lists (pools of 32+
candidates are common).
"""
from __future__ import annotations

import random

SUBJECT_PRONOUNS = "i we they you he she it everyone nobody someone".split()
DETERMINERS = "the a my your our their this that every some his her one no another".split()
ADJECTIVES = """
new old good little big great small young long bad high different important large
local social public strong real early best free full simple hard clear recent
certain open whole short late low dark green red blue quiet happy sad lucky busy
cold warm bright strange funny lazy brave angry hungry tired famous rich poor
modern ancient gentle heavy light soft loud rare sweet bitter wild calm proud
""".split()
NOUNS = """
man woman child dog cat friend teacher student doctor city house car book movie
song story game team school market river road window door letter phone computer
garden kitchen table chair coffee dinner breakfast party meeting plan idea problem
question answer reason night morning week year country world family company office
boy girl father mother brother sister neighbor driver writer artist singer player
captain farmer baker soldier king queen horse bird tree flower train bus ship plane
island mountain forest beach village street bridge museum church hospital library
restaurant hotel shop bank park station airport farm field lake sky sun moon star
picture paper report message gift box bag ticket key map clock lamp bed camera
""".split()
VERBS = """
saw liked found made took wanted loved needed called watched knew built bought sold
opened closed helped visited painted wrote read heard played met left kept brought
followed carried cleaned cooked fixed moved pushed pulled showed told asked answered
remembered forgot missed chose broke caught changed checked counted covered crossed
described designed discovered dropped enjoyed explained filled finished hated hid
joined killed lifted lost noticed ordered packed passed planned protected reached
received repaired returned saved searched shared signed started stopped studied
touched traded turned used washed""".split()
INTRANSITIVE = """
laughed smiled waited slept arrived worked cried danced jumped left stayed talked
walked listened agreed returned paused shouted sang travelled rested""".split()
ADVERBS = """
quickly slowly today yesterday again finally suddenly quietly happily really always
never often sometimes soon later early together alone carefully badly easily gently
loudly politely rarely seriously warmly""".split()
PREPOSITIONS = "in on at near with from behind under after before by for about into across".split()
AUXILIARIES = "will can would could should might must did".split()
BASE_VERBS = """
see like find make take want love need call watch know build buy sell open close help
visit paint write read hear play meet keep bring follow carry clean cook fix move""".split()


def _zipf_weights(n, s=1.0):
    return [1.0 / (r + 1) ** s for r in range(n)]


class _Lexicon:
    def __init__(self, words, rng, s=1.0):
        self.words = list(words)
        self.weights = _zipf_weights(len(self.words), s)
        self.rng = rng

    def __call__(self):
        return self.rng.choices(self.words, self.weights)[0]


class DeskCorpus:
    def __init__(self, seed=0):
        self.rng = rng = random.Random(seed)
        self.pron = _Lexicon(SUBJECT_PRONOUNS, rng)
        self.det = _Lexicon(DETERMINERS, rng)
        self.adj = _Lexicon(ADJECTIVES, rng, 0.9)
        self.noun = _Lexicon(NOUNS, rng, 0.9)
        self.verb = _Lexicon(VERBS, rng, 0.9)
        self.intr = _Lexicon(INTRANSITIVE, rng)
        self.adv = _Lexicon(ADVERBS, rng)
        self.prep = _Lexicon(PREPOSITIONS, rng)
        self.aux = _Lexicon(AUXILIARIES, rng)
        self.base = _Lexicon(BASE_VERBS, rng)

    def noun_phrase(self):
        words = [self.det()]
        r = self.rng.random()
        if r < 0.35:
            words.append(self.adj())
        elif r < 0.45:
            words.extend([self.adj(), self.adj()])
        words.append(self.noun())
        return words

    def subject(self):
        return [self.pron()] if self.rng.random() < 0.5 else self.noun_phrase()

    def verb_phrase(self):
        r = self.rng.random()
        if r < 0.55:
            return [self.verb()] + self.noun_phrase()
        if r < 0.75:
            return [self.aux(), self.base()] + self.noun_phrase()
        return [self.intr()]

    def sentence(self):
        words = self.subject() + self.verb_phrase()
        rng = self.rng
        while rng.random() < 0.4:
            words += [self.prep()] + self.noun_phrase()
        if rng.random() < 0.3:
            words.append(self.adv())
        return words

    def sentences(self, n):
        return [self.sentence() for _ in range(n)]


def desk_corpus(n_sentences=12_000, seed=0) -> list[str]:
    """``n_sentences`` lines of lowercase, space-separated words."""
    return [" ".join(s) for s in DeskCorpus(seed).sentences(n_sentences)]
