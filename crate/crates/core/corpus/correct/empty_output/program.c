int main() {
    int x;
    scanf("%d", &x);
    return 0;
}
