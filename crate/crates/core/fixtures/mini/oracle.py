"""Brute-force reference for the mini fixture: evaluates every pipeline rule directly."""
import json, math, re, sys, os
D = os.path.dirname(os.path.abspath(__file__))
ABBR = {"fig", "al", "e.g", "i.e", "dr", "vs", "etc"}

def tokenize(s):
    return [t for t in re.split(r"[^0-9a-zA-Z]+", s.lower()) if t]

def split_sentences(text):
    out, start = [], 0
    for i, ch in enumerate(text):
        if ch in ".!?" and i + 2 < len(text) + 1 and i + 1 < len(text) and text[i+1].isspace():
            j = i + 1
            while j < len(text) and text[j].isspace(): j += 1
            if j < len(text) and (text[j].isupper() or text[j].isdigit()):
                word = text[:i].split()[-1].lower().lstrip("([\"'") if text[:i].split() else ""
                if word in ABBR: continue
                seg = text[start:i+1].strip()
                if seg: out.append(seg)
                start = i + 1
    seg = text[start:].strip()
    if seg: out.append(seg)
    return out

emb = {}
for ln in open(f"{D}/embeddings.txt").read().splitlines()[1:]:
    p = ln.split(); emb[p[0]] = [float(x) for x in p[1:]]
dim = 4

def idf_table(units):
    df = {}
    for u in units:
        for t in set(tokenize(u)): df[t] = df.get(t, 0) + 1
    n = len(units)
    return lambda t: math.log((n + 1) / (df.get(t, 0) + 1))

docs = {}
for ln in open(f"{D}/docs.tsv").read().splitlines():
    if ln.strip():
        i, t = ln.split("\t", 1); docs[i] = t
doc_idf = idf_table(list(docs.values()))
q_idf = idf_table([l for l in open(f"{D}/question_corpus.txt").read().splitlines() if l.strip()])

def centroid(toks, w):
    acc, tot = [0.0] * dim, 0.0
    for t in toks:
        if t in emb:
            wt = w(t); tot += wt
            acc = [a + wt * v for a, v in zip(acc, emb[t])]
    return [a / tot for a in acc] if tot > 0 else [0.0] * dim

def cosd(u, v):
    nu = math.sqrt(sum(x*x for x in u)); nv = math.sqrt(sum(x*x for x in v))
    if nu == 0 or nv == 0: return 1.0
    return min(2.0, max(0.0, 1 - sum(a*b for a, b in zip(u, v)) / (nu * nv)))

passages = []
for d, t in docs.items():
    for k, s in enumerate(split_sentences(t)):
        passages.append((f"{d}#{k}", d, s))

def contiguous_in(a, b):
    return any(b[i:i+len(a)] == a for i in range(len(b) - len(a) + 1))

def lccr(a, b):
    best = 0
    for i in range(len(a)):
        for j in range(len(b)):
            l = 0
            while i+l < len(a) and j+l < len(b) and a[i+l] == b[j+l]: l += 1
            best = max(best, l)
    return best

def relevant(p, gold, thr=5):
    pt = tokenize(p[2])
    for d, s in gold:
        st = tokenize(s)
        if d != p[1] or not pt or not st: continue
        if contiguous_in(pt, st) or contiguous_in(st, pt) or lccr(pt, st) >= thr: return True
    return False

uni = lambda t: 1.0
qs = json.load(open(f"{D}/questions.json"))["questions"]
norm = lambda s: s.rstrip("/").rsplit("/", 1)[-1] if "://" in s else s
res = {}
for method in ["cd", "cd-idf", "cd-q"]:
    qw = {"cd": uni, "cd-idf": doc_idf, "cd-q": q_idf}[method]
    pw = uni if method == "cd" else doc_idf
    aps = []; ps = []; rs = []
    for q in qs:
        cands = {norm(d) for d in q["documents"]}
        gold = [(norm(s["document"]), s["text"]) for s in q.get("snippets", [])]
        qc = centroid(tokenize(q["body"]), qw)
        scored = sorted(((cosd(qc, centroid(tokenize(p[2]), pw)), p[0], p) for p in passages if p[1] in cands))[:10]
        rel = {p[0] for p in passages if relevant(p, gold)}
        hits = [1 if pid in rel else 0 for _, pid, _ in scored]
        ap = sum(sum(hits[:r+1]) / (r+1) for r in range(len(hits)) if hits[r]) / min(len(rel), 10) if rel else 0.0
        aps.append(ap); ps.append(sum(hits) / len(hits) if hits else 0.0); rs.append(sum(hits) / len(rel) if rel else 0.0)
    m = lambda x: sum(x) / len(x)
    P, R = m(ps), m(rs)
    res[method] = (m(aps), P, R, 2*P*R/(P+R) if P+R > 0 else 0.0, aps)
for k, v in res.items():
    print(k, repr(v[0]), repr(v[1]), repr(v[2]), repr(v[3]))
    print("   ", [round(a, 4) for a in v[4]])
