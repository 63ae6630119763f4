int sq(int v) {
    return v * v;
}

int main() {
    int x;
    scanf("%d", &x);
    printf("%d", sq(x) + 1);
    return 0;
}
