namespace hbvc {}
