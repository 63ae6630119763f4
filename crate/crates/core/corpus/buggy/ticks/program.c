int main() {
    int n, i;
    scanf("%d", &n);
    for (i = 1; i <= n; i++) {
        if (i % 2 == 0)
            printf("%d", 0);
        else
            printf("%d", i);
    }
    return 0;
}
