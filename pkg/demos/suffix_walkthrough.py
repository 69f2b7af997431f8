"""
Suffix arrays on "mississippi"
==============================

Builds the suffix array, the LCP array and the inverse ranks for a small
string, then looks up a pattern the way the SA encoders do.
"""

from salz import build_lcp, build_rank, build_suffix_array, longest_match, sa_range

text = b"mississippi"
sa = build_suffix_array(text)
lcp = build_lcp(text, sa)
rank = build_rank(sa)

# every row is one suffix, in sorted order
for j, (p, l) in enumerate(zip(sa, lcp)):
    print(f"{j:2d}  pos={p:2d}  lcp={l}  {text[p:].decode()}")

print("rank of suffix 0:", rank[0])

# all suffixes starting with 's' form one contiguous block of ranks
left, right = sa_range(text, sa, ord("s"))
print("'s' block:", left, right, [int(p) for p in sa[left:right + 1]])

# the longest prefix of "issia" that occurs in the text
left, right = sa_range(text, sa, ord("i"))
pos, length = longest_match(text, sa, left, right, b"issia")
print("issia ->", pos, length, text[pos:pos + length])
