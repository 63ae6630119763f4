int max2(int a, int b) {
    if (a > b)
        return a;
    return b;
}

int main() {
    int x, y, z, m;
    scanf("%d %d %d", &x, &y, &z);
    m = max2(max2(x, y), z);
    printf("%d", m);
    return 0;
}
