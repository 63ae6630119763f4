int main() {
    int a[4];
    int i, m;
    for (i = 0; i < 4; i++) {
        scanf("%d", &a[i]);
    }
    m = a[0];
    for (i = 1; i < 4; i++) {
        if (a[i] > m)
            m = a[i];
    }
    printf("%d", m);
    return 0;
}
