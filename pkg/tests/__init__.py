# tests/__init__.py
# SEO 블로그 생성 시스템 테스트 모듈
