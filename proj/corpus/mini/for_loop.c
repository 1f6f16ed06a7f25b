int i, s;
s = 0;
for (i = 0; i < 10; i++) {
  s = s + 1;
}
assert(s == 10);
