"""Shell sums of a lattice array, starting with the multiplication table."""

from lsum import ArraySpec, LSumEngine, LSumMethod

# A[a,b] = a*b on [1,n]^2. The k-th shell is row k plus column k minus the corner.
table = LSumEngine(ArraySpec.build("a*b", 2))
for k in range(1, 6):
    print(k, table.l_element_general(k))  # k^3

# adding the shells gives back the whole table, so sum k^3 = (n(n+1)/2)^2
report = table.verify(100, LSumMethod.GeneralT)
print("n <= 100 all pass:", report.passed)
print("total at n = 100:", table.total_sum(100), "=", (100 * 101 // 2) ** 2)

# in three dimensions there are four ways to get the same shell
cube = LSumEngine(ArraySpec.build("a + 2*b*c", 3))
k = 4
print(cube.l_element_3d(k), cube.l_element_general(k), cube.l_element_strong(k))

# the symmetric shortcut folds three faces into one, but needs a symmetric array
sym = LSumEngine(ArraySpec.build("1/(a*b*c)", 3))
print(sym.is_symmetric(), sym.l_element_symmetric(k) == sym.l_element_strong(k))
print(cube.is_symmetric())
