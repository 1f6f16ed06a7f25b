int i, size, sn;
assume(size >= 0);
sn = 0;
i = 1;
while (i <= size) {
  sn = sn + 1;
  i = i + 1;
}
assert(sn == size || sn == 0);
