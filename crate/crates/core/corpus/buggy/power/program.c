int main() {
    int b, e, i, p;
    scanf("%d %d", &b, &e);
    p = 1;
    for (i = 0; i < e; i++) {
        p = p + b;
    }
    printf("%d", p);
    return 0;
}
