from django.db import migrations, models


COMMUNITY_TYPE_CHOICES = [('CHANNEL', 'CHANNEL'), ('GROUP', 'GROUP')]
ACTION_TYPE_CHOICES = [('LIKE', 'LIKE'), ('UPVOTE', 'UPVOTE'), ('DOWNVOTE', 'DOWNVOTE'), ('SHARE', 'SHARE'),
                       ('QUOTE', 'QUOTE'), ('REPLY', 'REPLY'), ('MENTION', 'MENTION'), ('FOLLOW', 'FOLLOW'),
                       ('BLOCK', 'BLOCK'), ('LINK', 'LINK')]
ENTITY_TYPE_CHOICES = [('HASHTAG', 'HASHTAG'), ('MENTION', 'MENTION'), ('URL', 'URL'), ('EMAIL', 'EMAIL'),
                       ('MEDIA_KEY', 'MEDIA_KEY')]


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Community',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('community_id', models.TextField()),
                ('community_type', models.CharField(choices=COMMUNITY_TYPE_CHOICES, max_length=16)),
                ('community_username', models.TextField(blank=True, null=True)),
                ('community_name', models.TextField(blank=True, null=True)),
                ('bio', models.TextField(blank=True, null=True)),
                ('is_public', models.BooleanField(blank=True, null=True)),
                ('member_count', models.PositiveBigIntegerField(blank=True, null=True)),
                ('post_count', models.PositiveBigIntegerField(blank=True, null=True)),
                ('profile_image_url', models.TextField(blank=True, null=True)),
                ('owner_account_id', models.TextField(blank=True, null=True)),
                ('created_at', models.DateTimeField(blank=True, null=True)),
                ('retrieved_at', models.DateTimeField()),
            ],
            options={
                'db_table': 'communities',
            },
        ),
        migrations.CreateModel(
            name='Account',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('account_id', models.TextField()),
                ('user_name', models.TextField(blank=True, null=True)),
                ('profile_name', models.TextField(blank=True, null=True)),
                ('bio', models.TextField(blank=True, null=True)),
                ('location', models.JSONField(blank=True, null=True)),
                ('post_count', models.PositiveBigIntegerField(blank=True, null=True)),
                ('friend_count', models.PositiveBigIntegerField(blank=True, null=True)),
                ('follower_count', models.PositiveBigIntegerField(blank=True, null=True)),
                ('is_verified', models.BooleanField(blank=True, null=True)),
                ('profile_image_url', models.TextField(blank=True, null=True)),
                ('created_at', models.DateTimeField(blank=True, null=True)),
                ('retrieved_at', models.DateTimeField()),
            ],
            options={
                'db_table': 'accounts',
            },
        ),
        migrations.CreateModel(
            name='Post',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('post_id', models.TextField()),
                ('account_id', models.TextField()),
                ('conversation_id', models.TextField(blank=True, null=True)),
                ('community_id', models.TextField(blank=True, null=True)),
                ('body', models.TextField(blank=True, default='')),
                ('location', models.JSONField(blank=True, null=True)),
                ('like_count', models.PositiveBigIntegerField(blank=True, null=True)),
                ('dislike_count', models.PositiveBigIntegerField(blank=True, null=True)),
                ('view_count', models.PositiveBigIntegerField(blank=True, null=True)),
                ('share_count', models.PositiveBigIntegerField(blank=True, null=True)),
                ('comment_count', models.PositiveBigIntegerField(blank=True, null=True)),
                ('quote_count', models.PositiveBigIntegerField(blank=True, null=True)),
                ('bookmark_count', models.PositiveBigIntegerField(blank=True, null=True)),
                ('created_at', models.DateTimeField()),
                ('retrieved_at', models.DateTimeField()),
            ],
            options={
                'db_table': 'posts',
            },
        ),
        migrations.CreateModel(
            name='Action',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('originator_account_id', models.TextField(blank=True, null=True)),
                ('originator_post_id', models.TextField(blank=True, null=True)),
                ('target_account_id', models.TextField(blank=True, null=True)),
                ('target_post_id', models.TextField(blank=True, null=True)),
                ('action_type', models.CharField(choices=ACTION_TYPE_CHOICES, max_length=16)),
                ('created_at', models.DateTimeField()),
                ('retrieved_at', models.DateTimeField()),
            ],
            options={
                'db_table': 'actions',
            },
        ),
        migrations.CreateModel(
            name='Entity',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('post_id', models.TextField()),
                ('body', models.TextField()),
                ('entity_type', models.CharField(choices=ENTITY_TYPE_CHOICES, max_length=16)),
                ('created_at', models.DateTimeField()),
                ('retrieved_at', models.DateTimeField()),
            ],
            options={
                'db_table': 'entities',
            },
        ),
        migrations.CreateModel(
            name='AccountEnrichment',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('model_id', models.TextField()),
                ('body', models.JSONField(blank=True)),
                ('created_at', models.DateTimeField()),
                ('retrieved_at', models.DateTimeField()),
                ('account_id', models.TextField()),
            ],
            options={
                'db_table': 'account_enrichments',
            },
        ),
        migrations.CreateModel(
            name='PostEnrichment',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('model_id', models.TextField()),
                ('body', models.JSONField(blank=True)),
                ('created_at', models.DateTimeField()),
                ('retrieved_at', models.DateTimeField()),
                ('post_id', models.TextField()),
            ],
            options={
                'db_table': 'post_enrichments',
            },
        ),
        migrations.AddConstraint(
            model_name='community',
            constraint=models.UniqueConstraint(fields=('community_id', 'retrieved_at'), name='community_snapshot_unique'),
        ),
        migrations.AddConstraint(
            model_name='account',
            constraint=models.UniqueConstraint(fields=('account_id', 'retrieved_at'), name='account_snapshot_unique'),
        ),
        migrations.AddConstraint(
            model_name='post',
            constraint=models.UniqueConstraint(fields=('post_id', 'retrieved_at'), name='post_snapshot_unique'),
        ),
        migrations.AddConstraint(
            model_name='action',
            constraint=models.UniqueConstraint(
                fields=('originator_account_id', 'originator_post_id', 'target_account_id', 'target_post_id',
                        'action_type', 'created_at'),
                name='action_unique'),
        ),
        migrations.AddConstraint(
            model_name='entity',
            constraint=models.UniqueConstraint(fields=('post_id', 'entity_type', 'body', 'created_at'), name='entity_unique'),
        ),
        migrations.AddConstraint(
            model_name='accountenrichment',
            constraint=models.UniqueConstraint(fields=('account_id', 'model_id', 'created_at'), name='account_enrichment_unique'),
        ),
        migrations.AddConstraint(
            model_name='postenrichment',
            constraint=models.UniqueConstraint(fields=('post_id', 'model_id', 'created_at'), name='post_enrichment_unique'),
        ),
    ]
