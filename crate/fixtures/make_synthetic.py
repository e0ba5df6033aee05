"""Regenerates synthetic_1k.txt: 1,000 pre-tokenized Italian-like sentences with
gender agreement. Feminine forms are drawn less often than masculine ones."""

import random

rng = random.Random(7)

NOUNS = [  # (masc sg, fem sg, masc pl, fem pl)
    ("ragazzo", "ragazza", "ragazzi", "ragazze"),
    ("amico", "amica", "amici", "amiche"),
    ("figlio", "figlia", "figli", "figlie"),
    ("maestro", "maestra", "maestri", "maestre"),
    ("bambino", "bambina", "bambini", "bambine"),
    ("cugino", "cugina", "cugini", "cugine"),
    ("nonno", "nonna", "nonni", "nonne"),
    ("dottore", "dottoressa", "dottori", "dottoresse"),
    ("professore", "professoressa", "professori", "professoresse"),
    ("studente", "studentessa", "studenti", "studentesse"),
    ("attore", "attrice", "attori", "attrici"),
    ("scrittore", "scrittrice", "scrittori", "scrittrici"),
]
ADJ_STEMS = ["stanc", "pront", "sicur", "content", "nuov", "bell", "piccol", "alt",
             "italian", "american", "stranier", "famos", "sorpres", "preoccupat"]
PARTICIPLES = ["arrivat", "partit", "andat", "tornat", "nat", "stat", "uscit", "entrat",
               "venut", "rimast", "cresciut", "cadut"]
TRANS = ["chiest", "fatt", "dett", "scritt", "lett", "pres", "vist", "apert"]
PLACES = ["a casa", "a scuola", "in città", "al mare", "a Roma", "a Milano", "in ufficio",
          "dal medico", "in montagna", "al lavoro"]
TIMES = ["ieri", "oggi", "stamattina", "domenica", "poi", "finalmente", "già"]
DET = {("m", "sg"): ["il", "un", "quel"], ("f", "sg"): ["la", "una", "quella"],
       ("m", "pl"): ["i", "quei", "dei"], ("f", "pl"): ["le", "quelle", "delle"]}
ENDING = {("m", "sg"): "o", ("f", "sg"): "a", ("m", "pl"): "i", ("f", "pl"): "e"}
AUX = {"sg": ["è", "era", "sarà"], "pl": ["sono", "erano", "saranno"]}
FIRST = {"sg": ["sono", "ero", "sarò"], "pl": ["siamo", "eravamo", "saremo"]}


def noun(g, n):
    m_sg, f_sg, m_pl, f_pl = rng.choice(NOUNS)
    return {("m", "sg"): m_sg, ("f", "sg"): f_sg, ("m", "pl"): m_pl, ("f", "pl"): f_pl}[(g, n)]


def det(g, n, w):
    d = rng.choice(DET[(g, n)])
    if d == "il" and w[0] == "s" and w[1] not in "aeiou":
        d = "lo"
    if d in ("la", "il", "lo") and w[0] in "aeiou":
        return "l'" + w
    if d == "un" and w[0] == "s" and w[1] not in "aeiou":
        d = "uno"
    if d == "una" and w[0] in "aeiou":
        return "un'" + w
    return d + " " + w


def sentence():
    g = "f" if rng.random() < 0.3 else "m"
    n = "pl" if rng.random() < 0.3 else "sg"
    e = ENDING[(g, n)]
    kind = rng.randrange(6)
    if kind == 0:
        s = f"{det(g, n, noun(g, n))} {rng.choice(AUX[n])} {rng.choice(ADJ_STEMS)}{e} ."
    elif kind == 1:
        s = (f"{rng.choice(TIMES)} {det(g, n, noun(g, n))} {rng.choice(AUX[n])} "
             f"{rng.choice(PARTICIPLES)}{e} {rng.choice(PLACES)} .")
    elif kind == 2:
        s = f"{rng.choice(FIRST[n])} {rng.choice(ADJ_STEMS)}{e} , {rng.choice(['perché', 'ma', 'e'])} {rng.choice(FIRST[n])} {rng.choice(PARTICIPLES)}{e} {rng.choice(PLACES)} ."
    elif kind == 3:
        obj_g = "f" if rng.random() < 0.4 else "m"
        obj = noun(obj_g, "sg")
        pron = "l'" if True else ""
        s = (f"{det(g, n, noun(g, n))} {'ha' if n == 'sg' else 'hanno'} {rng.choice(TRANS)}o "
             f"{det(obj_g, 'sg', obj)} {rng.choice(PLACES)} .")
        if rng.random() < 0.5:
            s = f"l'{rng.choice(['ho', 'hai', 'abbiamo'])} {rng.choice(TRANS)}{ENDING[(obj_g, 'sg')]} {rng.choice(TIMES)} ."
    elif kind == 4:
        s = f"{det(g, n, noun(g, n))} e {det(g, n, noun(g, n))} {rng.choice(AUX[n])} {rng.choice(ADJ_STEMS)}{e} e {rng.choice(ADJ_STEMS)}{e} ."
    else:
        s = f"{rng.choice(['chi', 'dove', 'quando'])} {rng.choice(AUX[n])} {rng.choice(PARTICIPLES)}{e} {det(g, n, noun(g, n))} ?"
    return s[0].upper() + s[1:] if rng.random() < 0.5 else s


with open("synthetic_1k.txt", "w", encoding="utf-8") as f:
    for _ in range(1000):
        f.write(sentence() + "\n")
