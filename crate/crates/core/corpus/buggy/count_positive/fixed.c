int main() {
    int n, i, x, c;
    scanf("%d", &n);
    c = 0;
    for (i = 0; i < n; i++) {
        scanf("%d", &x);
        if (x > 0)
            c = c + 1;
    }
    printf("%d", c);
    return 0;
}
