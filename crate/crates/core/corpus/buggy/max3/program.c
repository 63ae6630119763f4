int main(){
  // finds maximum of 3 numbers
  int f,s,t;
  scanf("%d %d %d", &f, &s, &t);
  if (f < s && f >= t)
    // fix: f >= s
    printf("%d", f);
  if (f > s && s <= t)
    // fix: f < s and s >= t
    printf("%d", s);
  if (f > t && s > t)
    // fix: f < t and s < t
    printf("%d", t);

  return 0;
}
