int main() {
    int i, x, s;
    s = 0;
    for (i = 0; i < 3; i++) {
        scanf("%d", &x);
        s += x;
    }
    printf("%d", s / 3);
    return 0;
}
