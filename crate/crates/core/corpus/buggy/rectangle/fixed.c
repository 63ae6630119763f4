int main() {
    int w, h, area, per;
    scanf("%d %d", &w, &h);
    area = w * h;
    per = 2 * (w + h);
    printf("%d %d", area, per);
    return 0;
}
